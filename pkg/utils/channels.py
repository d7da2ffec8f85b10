# utils/channels.py - Choi matrices and canonical Kraus decompositions
import logging
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np

from models.linalg import BipartiteOperator
from models.verdicts import KrausDecomposition, KrausTerm
from utils.errors import DimensionMismatchError
from utils.linalg import hermitian_spectral_split

logger = logging.getLogger(__name__)

MapSpec = Union[np.ndarray, Sequence[np.ndarray]]


def _exact_sqrt(value: int, what: str) -> int:
    root = math.isqrt(value)
    if root * root != value:
        raise DimensionMismatchError(f"{what} {value} is not a perfect square")
    return root


def map_transfer_matrix(action: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Transfer matrix T of a linear map on n x n matrices: vec(Phi(rho)) = T vec(rho), row-major vec."""
    columns = []
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=complex)
            unit[i, j] = 1.0
            columns.append(np.asarray(action(unit), dtype=complex).reshape(-1))
    sizes = {c.shape[0] for c in columns}
    if len(sizes) != 1:
        raise DimensionMismatchError("the map must send every n x n matrix to a matrix of one fixed size")
    _exact_sqrt(sizes.pop(), "output size")
    return np.stack(columns, axis=1)


def choi_matrix(map_action: MapSpec, n: Optional[int] = None) -> BipartiteOperator:
    """(id_n (x) Phi)(E), with E the maximally entangled projector (1/n normalization).

    `map_action` is either an m^2 x n^2 transfer matrix or a list of m x n
    Kraus operators (Phi(rho) = sum_i K_i rho K_i^*).
    """
    if isinstance(map_action, np.ndarray) and map_action.ndim == 2:
        rows, cols = map_action.shape
        n_in = _exact_sqrt(cols, "transfer matrix column count")
        m = _exact_sqrt(rows, "transfer matrix row count")
        if n is not None and n != n_in:
            raise DimensionMismatchError(f"transfer matrix acts on {n_in} x {n_in} matrices, not {n} x {n}")
        n = n_in
        blocks = map_action.reshape(m, m, n, n).transpose(2, 0, 3, 1)
        return BipartiteOperator.from_matrix(blocks.reshape(n * m, n * m) / n, n, m)

    kraus = [np.asarray(op, dtype=complex) for op in map_action]
    if not kraus:
        raise DimensionMismatchError("need at least one Kraus operator")
    m, n_in = kraus[0].shape
    if n is not None and n != n_in:
        raise DimensionMismatchError(f"Kraus operators act on dimension {n_in}, not {n}")
    if any(op.shape != (m, n_in) for op in kraus):
        raise DimensionMismatchError("all Kraus operators must share one shape")
    n = n_in
    vectors = np.array([op.T.reshape(-1) for op in kraus]) / np.sqrt(n)
    return BipartiteOperator.from_matrix(vectors.T @ vectors.conj(), n, m)


def canonical_kraus(X: BipartiteOperator, tol_zero: Optional[float] = None) -> KrausDecomposition:
    """Kraus operators read off the eigenvectors of a Hermitian Choi matrix."""
    split = hermitian_spectral_split(X, tol_zero)
    n, m = X.dims.n, X.dims.m

    def terms(values, vectors):
        return [
            KrausTerm(weight=float(n * value), operator=vectors[:, i].reshape(n, m).T)
            for i, value in enumerate(values)
        ]

    decomposition = KrausDecomposition(
        n=n,
        m=m,
        positive_ops=terms(split.positive_values, split.positive_vectors),
        negative_ops=terms(split.negative_values, split.negative_vectors),
    )
    logger.debug(
        f"canonical Kraus form: {len(decomposition.positive_ops)} positive, "
        f"{len(decomposition.negative_ops)} negative terms"
    )
    return decomposition
