# models/schmidt.py - Schmidt decomposition of a bipartite pure state
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer

from models.linalg import BipartiteDims, complex_pairs


class SchmidtDecomposition(BaseModel):
    """|v> = sum_i alpha_i |u_i> (x) |v_i>, all min(n, m) terms kept.

    Frames are stored column-wise; coefficients past `rank` are numerically zero.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: np.ndarray
    left_frame: np.ndarray
    right_frame: np.ndarray
    rank: int
    dims: BipartiteDims

    @field_serializer("coefficients")
    def dump_coefficients(self, values: np.ndarray) -> List[float]:
        return [float(x) for x in values]

    @field_serializer("left_frame", "right_frame")
    def dump_frame(self, frame: np.ndarray) -> List[List[List[float]]]:
        return [complex_pairs(frame[:, i]) for i in range(frame.shape[1])]

    def reconstruct(self, terms: Optional[int] = None) -> np.ndarray:
        """Amplitudes of sum over the first `terms` Schmidt terms."""
        terms = self.coefficients.shape[0] if terms is None else terms
        matrix = (self.left_frame[:, :terms] * self.coefficients[:terms]) @ self.right_frame[:, :terms].T
        return matrix.reshape(-1)
