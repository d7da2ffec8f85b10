# utils/schmidt.py - Schmidt decomposition, Schmidt rank and vector k-norms
import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from config import SCHMIDT_RANK_TOL
from models.linalg import PureState
from models.schmidt import SchmidtDecomposition
from utils.errors import NumericalFailure, ZeroVectorError
from utils.linalg import singular_values, vec_to_operator

logger = logging.getLogger(__name__)


def schmidt_coefficients(amplitudes: np.ndarray, n: int, m: int) -> np.ndarray:
    """Descending Schmidt coefficients of a raw (not necessarily unit) vector."""
    if not np.any(amplitudes):
        raise ZeroVectorError("the zero vector has no Schmidt decomposition")
    return singular_values(np.asarray(amplitudes).reshape(n, m))


def truncate_to_schmidt_rank(amplitudes: np.ndarray, n: int, m: int, k: int) -> Tuple[np.ndarray, float]:
    """Hard-threshold a vector to its k largest Schmidt terms and renormalize.

    Returns the unit truncated vector w and <w|y> = sqrt(sum_{i<=k} alpha_i^2),
    which maximizes Re <w|y> over unit w with SR(w) <= k.
    """
    matrix = np.asarray(amplitudes).reshape(n, m)
    try:
        u, s, vh = scipy.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure(f"SVD did not converge: {e}") from e
    weight = float(np.sqrt(np.sum(s[:k] ** 2)))
    if weight == 0.0:
        raise ZeroVectorError("cannot truncate the zero vector")
    truncated = (u[:, :k] * s[:k]) @ vh[:k, :]
    return truncated.reshape(-1) / weight, weight


def schmidt_decompose(v: PureState, tol: float = SCHMIDT_RANK_TOL) -> SchmidtDecomposition:
    matrix = vec_to_operator(v)
    if not np.any(matrix):
        raise ZeroVectorError("the zero vector has no Schmidt decomposition")
    try:
        u, s, vh = scipy.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        logger.error(f"SVD failed for a {v.dims.n}x{v.dims.m} state: {e}")
        raise NumericalFailure(f"SVD did not converge: {e}") from e
    rank = int(np.count_nonzero(s > tol * s[0]))
    return SchmidtDecomposition(
        coefficients=s,
        left_frame=u,
        right_frame=vh.T,
        rank=rank,
        dims=v.dims,
    )


def schmidt_rank(v: PureState, tol: float = SCHMIDT_RANK_TOL) -> int:
    return schmidt_decompose(v, tol).rank


def vector_k_norm(v: PureState, k: int) -> float:
    """||v||_{s(k)} = sqrt(sum of the k largest squared Schmidt coefficients)."""
    k = v.dims.check_k(k)
    coefficients = schmidt_coefficients(v.amplitudes, v.dims.n, v.dims.m)
    return float(np.sqrt(np.sum(coefficients[:k] ** 2)))


def nearest_rank_k_state(v: PureState, k: int) -> PureState:
    """Closest state of Schmidt rank <= k; overlap with v equals ||v||_{s(k)}.

    Ties among equal coefficients keep the first k of the sorted order.
    """
    k = v.dims.check_k(k)
    truncated, _ = truncate_to_schmidt_rank(v.amplitudes, v.dims.n, v.dims.m, k)
    return PureState.from_amplitudes(truncated, v.dims.n, v.dims.m, normalize=True)


def max_rank_k_fidelity(v: PureState, k: int) -> float:
    """sup over SR(w) <= k of F(|v><v|, |w><w|), i.e. ||v||_{s(k)}^2."""
    return vector_k_norm(v, k) ** 2
