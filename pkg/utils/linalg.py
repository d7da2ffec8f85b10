# utils/linalg.py - Dense linear-algebra substrate shared by every other module
import logging
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from config import DENSITY_TOL, EIGEN_CLUSTER_RTOL, PROJECTION_TOL, ZERO_EIG_RTOL
from models.linalg import BipartiteDims, BipartiteOperator, PureState, SpectralSplit
from utils.errors import (
    DimensionMismatchError, NotDensityOperatorError, NotHermitianError,
    NumericalFailure, RankOutOfRangeError,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[BipartiteOperator, np.ndarray]


def as_array(X: MatrixLike) -> np.ndarray:
    if isinstance(X, BipartiteOperator):
        return X.entries
    return np.asarray(X)


def hermitian_eigh(entries: np.ndarray, eigvals_only: bool = False):
    """scipy eigh on the Hermitian part of `entries`, ascending order."""
    sym = (entries + entries.conj().T) / 2
    try:
        if eigvals_only:
            return scipy.linalg.eigvalsh(sym)
        values, vectors = scipy.linalg.eigh(sym)
    except np.linalg.LinAlgError as e:
        logger.error(f"Hermitian eigensolver failed on a {entries.shape[0]}x{entries.shape[0]} matrix: {e}")
        raise NumericalFailure(f"eigensolver did not converge: {e}") from e
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def singular_values(matrix: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.svdvals(matrix)
    except np.linalg.LinAlgError as e:
        logger.error(f"SVD failed on a {matrix.shape} matrix: {e}")
        raise NumericalFailure(f"SVD did not converge: {e}") from e


def require_hermitian(X: BipartiteOperator, what: str = "operator") -> BipartiteOperator:
    if not X.hermitian:
        raise NotHermitianError(f"{what} must be Hermitian")
    return X


# ---------------------------------------------------------------------------
# Standard objects
# ---------------------------------------------------------------------------

def identity_operator(n: int, m: int) -> BipartiteOperator:
    return BipartiteOperator.from_matrix(np.eye(n * m), n, m)


def maximally_entangled_state(n: int) -> PureState:
    """|e> = (1/sqrt(n)) sum_i |e_i>|e_i> in H_n (x) H_n."""
    amplitudes = np.eye(n).reshape(-1) / np.sqrt(n)
    return PureState.from_amplitudes(amplitudes, n, n)


def maximally_entangled_projector(n: int) -> BipartiteOperator:
    """E = |e><e|."""
    return projector(maximally_entangled_state(n))


def swap_operator(n: int) -> BipartiteOperator:
    """SWAP |a>|b> = |b>|a>; equals n * E^Gamma."""
    swap = np.eye(n * n).reshape(n, n, n, n).transpose(0, 1, 3, 2).reshape(n * n, n * n)
    return BipartiteOperator.from_matrix(swap, n, n)


def product_state(a, b) -> PureState:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return PureState.from_amplitudes(np.kron(a, b), a.shape[0], b.shape[0])


def projector(v: PureState) -> BipartiteOperator:
    amplitudes = v.amplitudes
    return BipartiteOperator(entries=np.outer(amplitudes, amplitudes.conj()), dims=v.dims)


def expectation(X: MatrixLike, v: Union[PureState, np.ndarray]) -> float:
    """Re <v|X|v>."""
    amplitudes = v.amplitudes if isinstance(v, PureState) else np.asarray(v)
    return float(np.real(np.vdot(amplitudes, as_array(X) @ amplitudes)))


def operator_norm(X: MatrixLike) -> float:
    entries = as_array(X)
    if entries.size == 0:
        return 0.0
    return float(singular_values(entries)[0])


def is_normal(X: MatrixLike, rtol: float = 1e-10) -> bool:
    entries = as_array(X)
    scale = max(float(np.max(np.abs(entries))), 1e-300) ** 2
    commutator = entries @ entries.conj().T - entries.conj().T @ entries
    return float(np.max(np.abs(commutator))) <= rtol * scale * entries.shape[0]


def is_projection(X: MatrixLike, tol: float = PROJECTION_TOL) -> bool:
    entries = as_array(X)
    if np.max(np.abs(entries - entries.conj().T), initial=0.0) > tol:
        return False
    return float(np.max(np.abs(entries @ entries - entries), initial=0.0)) <= tol


def distinct_eigenvalues(values: np.ndarray, rtol: float = EIGEN_CLUSTER_RTOL) -> List[Tuple[float, int]]:
    """Cluster ascending eigenvalues; returns (mean, multiplicity) per cluster."""
    values = np.sort(np.asarray(values, dtype=float), kind="stable")
    if values.size == 0:
        return []
    scale = max(float(np.max(np.abs(values))), 1e-300)
    clusters = [[values[0]]]
    for value in values[1:]:
        if value - clusters[-1][-1] > rtol * scale:
            clusters.append([value])
        else:
            clusters[-1].append(value)
    return [(float(np.mean(c)), len(c)) for c in clusters]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def vec_to_operator(v: PureState) -> np.ndarray:
    """A_v: (A_v)_ij is the amplitude of |e_i> (x) |f_j>."""
    if v.amplitudes.shape[0] != v.dims.total:
        raise DimensionMismatchError(f"vector length {v.amplitudes.shape[0]} != n*m = {v.dims.total}")
    return v.amplitudes.reshape(v.dims.n, v.dims.m)


def partial_transpose(X: BipartiteOperator) -> BipartiteOperator:
    """Transpose on the second factor: X^Gamma[(i,j),(k,l)] = X[(i,l),(k,j)]."""
    n, m = X.dims.n, X.dims.m
    entries = X.entries.reshape(n, m, n, m).transpose(0, 3, 2, 1).reshape(n * m, n * m)
    return BipartiteOperator(entries=entries, dims=X.dims)


def permute_to_bipartite(X: MatrixLike, n: int) -> BipartiteOperator:
    """Regroup an operator on (H_n (x) H_n)^{(x) r} across the cut
    (first factors) | (second factors), giving dims (n^r, n^r)."""
    entries = as_array(X)
    if n < 2:
        raise DimensionMismatchError("local dimension n must be at least 2")
    side = entries.shape[0]
    if entries.ndim != 2 or entries.shape[1] != side:
        raise DimensionMismatchError(f"operator must be square, got shape {entries.shape}")
    r, power = 0, 1
    while power < side:
        power *= n * n
        r += 1
    if power != side or r == 0:
        raise DimensionMismatchError(f"side {side} is not a power of n^2 = {n * n}")
    if r == 1:
        return BipartiteOperator.from_matrix(entries, n, n)
    order = list(range(0, 2 * r, 2)) + list(range(1, 2 * r, 2))
    axes = order + [2 * r + a for a in order]
    local = n ** r
    regrouped = entries.reshape([n] * (4 * r)).transpose(axes).reshape(local * local, local * local)
    return BipartiteOperator.from_matrix(regrouped, local, local)


def ky_fan_norm(X: MatrixLike, k: int) -> float:
    """Sum of the k largest singular values."""
    entries = as_array(X)
    limit = min(entries.shape)
    if k < 1 or k > limit:
        raise RankOutOfRangeError(f"k={k} out of range: need 1 <= k <= {limit}")
    return float(np.sum(singular_values(entries)[:k]))


def _check_density(rho: MatrixLike, name: str) -> np.ndarray:
    entries = as_array(rho)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise NotDensityOperatorError(f"{name} must be a square matrix")
    if np.max(np.abs(entries - entries.conj().T), initial=0.0) > DENSITY_TOL:
        raise NotDensityOperatorError(f"{name} is not Hermitian")
    trace = np.trace(entries).real
    if abs(trace - 1.0) > DENSITY_TOL:
        raise NotDensityOperatorError(f"{name} has trace {trace:.12g}, expected 1")
    smallest = hermitian_eigh(entries, eigvals_only=True)[0]
    if smallest < -DENSITY_TOL:
        raise NotDensityOperatorError(f"{name} has negative eigenvalue {smallest:.3g}")
    return entries


def trace_distance(rho: MatrixLike, sigma: MatrixLike) -> float:
    """delta = (1/2) Tr |rho - sigma|."""
    a = _check_density(rho, "rho")
    b = _check_density(sigma, "sigma")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(hermitian_eigh(a - b, eigvals_only=True))))


def _psd_sqrt(entries: np.ndarray) -> np.ndarray:
    values, vectors = hermitian_eigh(entries)
    return (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T


def fidelity(rho: MatrixLike, sigma: MatrixLike) -> float:
    """F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a = _check_density(rho, "rho")
    b = _check_density(sigma, "sigma")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    root = _psd_sqrt(a)
    inner = hermitian_eigh(root @ b @ root, eigvals_only=True)
    return float(np.sum(np.sqrt(np.clip(inner, 0.0, None))) ** 2)


def hermitian_spectral_split(X: BipartiteOperator, tol_zero: Optional[float] = None) -> SpectralSplit:
    require_hermitian(X)
    values, vectors = hermitian_eigh(X.entries)
    if tol_zero is None:
        tol_zero = ZERO_EIG_RTOL * float(np.max(np.abs(values), initial=0.0))
    pos = values > tol_zero
    neg = values < -tol_zero
    zero = ~(pos | neg)

    def _part(mask, weights=None):
        cols = vectors[:, mask]
        if weights is not None:
            entries = (cols * weights[mask]) @ cols.conj().T
        else:
            entries = cols @ cols.conj().T
        return BipartiteOperator(entries=entries, dims=X.dims)

    logger.debug(
        f"spectral split of {X.side}x{X.side}: {int(pos.sum())} positive, "
        f"{int(zero.sum())} zero, {int(neg.sum())} negative (tol {tol_zero:.3g})"
    )
    return SpectralSplit(
        eigenvalues=values,
        eigenvectors=vectors,
        pos_part=_part(pos, values),
        neg_part=_part(neg, values),
        proj_zero=_part(zero),
        proj_neg=_part(neg),
        tol_zero=float(tol_zero),
    )


def max_schmidt_subspace_dim(n: int, m: int, k: int) -> int:
    """Largest subspace of H_n (x) H_m whose vectors all have SR >= k."""
    BipartiteDims(n=n, m=m).check_k(k)
    return (n - k + 1) * (m - k + 1)
