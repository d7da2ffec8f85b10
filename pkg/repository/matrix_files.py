# repository/matrix_files.py - Read and write the shared JSON matrix format
import json
import logging
from pathlib import Path
from typing import Union

from models.linalg import BipartiteOperator, PureState
from models.payloads import MatrixPayload

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class MatrixFileRepo:
    @staticmethod
    def load_payload(path: PathLike) -> MatrixPayload:
        """Parse a matrix file; malformed JSON surfaces as ValueError."""
        text = Path(path).read_text()
        payload = MatrixPayload.model_validate(json.loads(text))
        logger.debug(f"loaded {payload.kind} {payload.n}x{payload.m} from {path}")
        return payload

    @staticmethod
    def load_state(path: PathLike, normalize: bool = False) -> PureState:
        return MatrixFileRepo.load_payload(path).to_state(normalize=normalize)

    @staticmethod
    def load_operator(path: PathLike) -> BipartiteOperator:
        return MatrixFileRepo.load_payload(path).to_operator()

    @staticmethod
    def save(path: PathLike, value: Union[PureState, BipartiteOperator]) -> Path:
        path = Path(path)
        path.write_text(json.dumps(value.model_dump(), sort_keys=True))
        logger.debug(f"wrote {type(value).__name__} to {path}")
        return path
