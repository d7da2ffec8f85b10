# utils/opnorm.py - Bounds, heuristic and oracle for the S(k) operator norms
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from config import (
    BRUTEFORCE_BATCH, BRUTEFORCE_SAMPLES, DEFAULT_SEED, HEURISTIC_GAIN_RTOL,
    HEURISTIC_MAX_ITERS, HEURISTIC_RESTARTS, POSITIVE_TOL, ZERO_EIG_RTOL,
)
from models.linalg import BipartiteOperator, PureState
from models.norms import NormBounds, ProjectionBounds
from utils.errors import (
    DimensionMismatchError, NotNormalError, NotPositiveError, NotProjectionError,
    NumericalFailure, RankOutOfRangeError,
)
from utils.linalg import expectation, hermitian_eigh, is_normal, is_projection, operator_norm, require_hermitian
from utils.random_states import random_schmidt_amplitudes, random_schmidt_batch
from utils.schmidt import nearest_rank_k_state, truncate_to_schmidt_rank, vector_k_norm

logger = logging.getLogger(__name__)


def schmidt_weight_table(vectors: np.ndarray, n: int, m: int) -> np.ndarray:
    """Row i, column h-1 holds ||v_i||^2_{s(h)} for the columns v_i of `vectors`."""
    matrices = vectors.T.reshape(-1, n, m)
    try:
        coefficients = np.linalg.svd(matrices, compute_uv=False)
    except np.linalg.LinAlgError as e:
        logger.error(f"batched SVD failed on {matrices.shape[0]} eigenvectors: {e}")
        raise NumericalFailure(f"SVD did not converge: {e}") from e
    return np.cumsum(coefficients ** 2, axis=1)


def _normal_eigensystem(X: BipartiteOperator) -> Tuple[np.ndarray, np.ndarray]:
    if X.hermitian:
        return hermitian_eigh(X.entries)
    if not is_normal(X):
        raise NotNormalError("the spectral upper bound needs a normal operator")
    try:
        triangular, unitary = scipy.linalg.schur(X.entries.astype(complex), output="complex")
    except np.linalg.LinAlgError as e:
        raise NumericalFailure(f"Schur decomposition did not converge: {e}") from e
    return np.diag(triangular), unitary


# ---------------------------------------------------------------------------
# Exact values and closed-form bounds
# ---------------------------------------------------------------------------

def op_norm_rank_one(w: PureState, v: PureState, k: int) -> float:
    """||w><v| ||_{S(k)} = ||w||_{s(k)} ||v||_{s(k)}."""
    if w.dims != v.dims:
        raise DimensionMismatchError("both vectors must live on the same H_n (x) H_m")
    return vector_k_norm(w, k) * vector_k_norm(v, k)


def op_norm_upper_spectral(X: BipartiteOperator, k: int) -> float:
    """sum_i |lambda_i| ||v_i||^2_{s(k)} over an orthonormal eigenbasis of a normal X."""
    k = X.dims.check_k(k)
    values, vectors = _normal_eigensystem(X)
    weights = schmidt_weight_table(vectors, X.dims.n, X.dims.m)
    return float(np.sum(np.abs(values) * weights[:, k - 1]))


def _eigenvalue_index(n: int, m: int, r: int) -> int:
    # 0-based position of lambda_{nm - (n-r)(m-r)} in the ascending spectrum
    return n * m - (n - r) * (m - r) - 1


def op_norm_lower_eig(X: BipartiteOperator, k: int, r: int) -> float:
    require_hermitian(X)
    k = X.dims.check_k(k)
    r = X.dims.check_k(r, "r")
    if r < k:
        raise RankOutOfRangeError(f"r={r} must be at least k={k}")
    values = hermitian_eigh(X.entries, eigvals_only=True)
    return k / r * float(values[_eigenvalue_index(X.dims.n, X.dims.m, r)])


def op_norm_lower_eig_best(X: BipartiteOperator, k: int, values: Optional[np.ndarray] = None) -> Tuple[float, int]:
    """Best eigenvalue lower bound over r in [k, min(n, m)], applied to X and -X.

    Returns the bound and the r that attains it.
    """
    require_hermitian(X)
    k = X.dims.check_k(k)
    n, m = X.dims.n, X.dims.m
    if values is None:
        values = hermitian_eigh(X.entries, eigvals_only=True)
    flipped = -values[::-1]
    best, best_r = 0.0, k
    for r in range(k, X.dims.max_rank + 1):
        idx = _eigenvalue_index(n, m, r)
        candidate = k / r * float(max(values[idx], flipped[idx]))
        if candidate > best:
            best, best_r = candidate, r
    return best, best_r


def op_norm_equiv_transfer(value_h: float, h: int, k: int) -> Tuple[float, float]:
    """Bracket [||X||_{S(h)}, (k/h) ||X||_{S(h)}] for ||X||_{S(k)}, h <= k."""
    if h < 1 or h > k:
        raise RankOutOfRangeError(f"need 1 <= h <= k, got h={h}, k={k}")
    return value_h, k / h * value_h


def operator_norm_floor(X: BipartiteOperator, k: int, norm: Optional[float] = None) -> float:
    """(k / min(n, m)) ||X||."""
    k = X.dims.check_k(k)
    if norm is None:
        norm = operator_norm(X)
    return k / X.dims.max_rank * norm


def smallest_forcing_rank(n: int, m: int, rank: int) -> int:
    """Smallest r with rank >= (n-r)(m-r) + 1, i.e. ||P||_S(r) = 1 for any projection of that rank.

    Integer form of ceil((n + m - sqrt((n-m)^2 + 4 rank - 4)) / 2).
    """
    small = min(n, m)
    root = math.isqrt((n - m) ** 2 + 4 * (rank - 1))
    r = max(1, min(small, (n + m - root) // 2))
    while r > 1 and (n - r + 1) * (m - r + 1) <= rank - 1:
        r -= 1
    while (n - r) * (m - r) > rank - 1:
        r += 1
    return r


def rank_projection_bounds(n: int, m: int, rank: int, k: int) -> ProjectionBounds:
    """Both projection lower bounds, exact, from the dimensions and rank alone."""
    small = min(n, m)
    if k < 1 or k > small:
        raise RankOutOfRangeError(f"k={k} out of range: need 1 <= k <= min(n, m) = {small}")
    if rank < 0 or rank > n * m:
        raise ValueError(f"rank {rank} out of range for a {n * m}-dimensional space")
    if rank == 0:
        zero = Fraction(0)
        return ProjectionBounds(n=n, m=m, rank=rank, k=k, ineq1=zero, ineq2=zero)
    r_star = smallest_forcing_rank(n, m, rank)
    ineq1 = min(Fraction(1), Fraction(k, r_star))
    if small == 1:
        ineq2 = Fraction(1)
    else:
        ineq2 = Fraction((k - 1) * n * m + (small - k) * rank, n * m * (small - 1))
    return ProjectionBounds(n=n, m=m, rank=rank, k=k, ineq1=ineq1, ineq2=ineq2)


def projection_interpolation(lower_h: float, h: int, k: int, m: int) -> float:
    """Lower bound on ||P||_{S(k)} from a lower bound on ||P||_{S(h)}, h <= k <= m."""
    if h < 1 or h > k or k > m:
        raise RankOutOfRangeError(f"need 1 <= h <= k <= m, got h={h}, k={k}, m={m}")
    if m == 1:
        return lower_h
    t = (k - h) / (m - 1)
    return (1 - t) * lower_h + t


def projection_rank(P: BipartiteOperator) -> int:
    return int(round(float(np.trace(P.entries).real)))


def projection_lower_bounds(P: BipartiteOperator, k: int, known: Optional[Mapping[int, float]] = None) -> float:
    """Best projection lower bound, optionally improved by known ||P||_{S(h)} lower bounds."""
    if not is_projection(P):
        raise NotProjectionError("operator is not an orthogonal projection")
    k = P.dims.check_k(k)
    bounds = rank_projection_bounds(P.dims.n, P.dims.m, projection_rank(P), k)
    best = float(bounds.best)
    for h, value in (known or {}).items():
        if h <= k:
            best = max(best, projection_interpolation(value, h, k, P.dims.max_rank))
    return best


# ---------------------------------------------------------------------------
# Heuristic maximizer and brute-force oracle
# ---------------------------------------------------------------------------

def _ascend(shifted: np.ndarray, start: np.ndarray, n: int, m: int, k: int, max_iters: int) -> Tuple[np.ndarray, int]:
    """Truncated power iteration on a PSD matrix; <v|Y|v> never decreases."""
    v, _ = truncate_to_schmidt_rank(start, n, m, k)
    value = expectation(shifted, v)
    iterations = 0
    for iterations in range(1, max_iters + 1):
        y = shifted @ v
        if not np.any(y):
            break
        candidate, _ = truncate_to_schmidt_rank(y, n, m, k)
        candidate_value = expectation(shifted, candidate)
        gain = candidate_value - value
        if gain > 0:
            v, value = candidate, candidate_value
        if gain <= HEURISTIC_GAIN_RTOL * max(abs(value), np.finfo(float).tiny):
            break
    return v, iterations


def _start_vectors(X: BipartiteOperator, k: int, restarts: int, seed, top: np.ndarray,
                   initial: Sequence[np.ndarray]) -> List[np.ndarray]:
    n, m = X.dims.n, X.dims.m
    starts = [np.asarray(a, dtype=complex).reshape(-1) for a in initial]
    starts.append(top)
    children = np.random.SeedSequence(seed).spawn(restarts)
    for child in children:
        starts.append(random_schmidt_amplitudes(np.random.default_rng(child), n, m, k))
    return starts


def _heuristic_at_rank(X: BipartiteOperator, shifted: np.ndarray, k: int, starts: List[np.ndarray],
                       max_iters: int, workers: Optional[int]) -> Tuple[np.ndarray, float]:
    n, m = X.dims.n, X.dims.m

    def run(start):
        return _ascend(shifted, start, n, m, k, max_iters)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(start) for start in starts]

    values = np.array([expectation(X, v) for v, _ in results])
    best = int(np.argmax(values))
    logger.debug(
        f"heuristic k={k}: {len(starts)} starts, best start #{best} "
        f"value {values[best]:.12g} after {results[best][1]} iterations"
    )
    return results[best][0], float(values[best])


def op_norm_heuristic(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    max_iters: int = HEURISTIC_MAX_ITERS,
    seed=DEFAULT_SEED,
    initial: Sequence[np.ndarray] = (),
    chain: bool = False,
    workers: Optional[int] = None,
) -> NormBounds:
    """Lower bound on ||X||_{S(k)} for positive X with a Schmidt-rank-k witness.

    Runs truncated power iteration on X - lambda_min I from the truncated top
    eigenvector, any `initial` vectors and `restarts` random Schmidt-rank-k
    states, keeping the best. With `chain`, ranks 1..k are solved in turn and
    each seeds the next, so the bound never decreases in k.
    """
    require_hermitian(X)
    k = X.dims.check_k(k)
    if restarts < 0 or max_iters < 1:
        raise ValueError("restarts must be >= 0 and max_iters >= 1")
    values, vectors = hermitian_eigh(X.entries)
    if values[0] < -POSITIVE_TOL * max(1.0, abs(values[-1])):
        raise NotPositiveError(f"heuristic needs a positive operator, lambda_min = {values[0]:.3g}")

    shifted = X.entries - values[0] * np.eye(X.side)
    top = vectors[:, -1]
    ranks = range(1, k + 1) if chain else [k]
    witness, value = None, 0.0
    for h in ranks:
        seeds = list(initial) + ([witness] if witness is not None else [])
        starts = _start_vectors(X, h, restarts, seed, top, seeds)
        witness, value = _heuristic_at_rank(X, shifted, h, starts, max_iters, workers)

    state = PureState.from_amplitudes(witness, X.dims.n, X.dims.m, normalize=True)
    value = expectation(X, state)
    logger.info(f"heuristic ||X||_S({k}) >= {value:.12g} ({restarts} restarts, chain={chain})")
    return NormBounds(
        k=k,
        lower=value,
        upper=max(float(values[-1]), value),
        lower_witness=state,
        methods=["lower:heuristic", "upper:operator_norm"],
    )


def op_norm_bruteforce(X: BipartiteOperator, k: int, samples: int = BRUTEFORCE_SAMPLES, seed=DEFAULT_SEED) -> float:
    """max |<v|X|v>| over `samples` random states of each Schmidt rank h <= k.

    Rank h always draws from child h of the seed, so for a fixed seed the
    estimate is nondecreasing in k.
    """
    require_hermitian(X)
    k = X.dims.check_k(k)
    n, m = X.dims.n, X.dims.m
    best = 0.0
    for h, child in enumerate(np.random.SeedSequence(seed).spawn(k), start=1):
        rng = np.random.default_rng(child)
        for start in range(0, samples, BRUTEFORCE_BATCH):
            count = min(BRUTEFORCE_BATCH, samples - start)
            batch = random_schmidt_batch(rng, n, m, h, count)
            values = np.sum(batch.conj() * (batch @ X.entries.T), axis=1).real
            best = max(best, float(np.max(np.abs(values))))
        logger.debug(f"brute force rank {h}: best {best:.12g} after {samples} samples")
    return best


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------

def _rank_one_bounds(X: BipartiteOperator, k: int, values: np.ndarray, vectors: np.ndarray) -> Optional[NormBounds]:
    magnitudes = np.abs(values)
    tol = ZERO_EIG_RTOL * float(np.max(magnitudes, initial=0.0))
    if np.count_nonzero(magnitudes > tol) != 1:
        return None
    idx = int(np.argmax(magnitudes))
    v = PureState.from_amplitudes(vectors[:, idx], X.dims.n, X.dims.m, normalize=True)
    exact = float(magnitudes[idx]) * vector_k_norm(v, k) ** 2
    residual = float(np.sum(magnitudes) - magnitudes[idx])
    witness = nearest_rank_k_state(v, k) if values[idx] > 0 else None
    lower = max(exact - residual, 0.0)
    if witness is not None:
        lower = max(lower, min(expectation(X, witness), exact))
    return NormBounds(k=k, lower=lower, upper=exact + residual,
                      lower_witness=witness, methods=["exact:rank_one"])


def op_norm_bounds(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    seed=DEFAULT_SEED,
    use_heuristic: bool = True,
    workers: Optional[int] = None,
) -> NormBounds:
    """Tightest certified interval for ||X||_{S(k)} from every applicable rule."""
    require_hermitian(X)
    k = X.dims.check_k(k)
    values, vectors = hermitian_eigh(X.entries)

    rank_one = _rank_one_bounds(X, k, values, vectors)
    if rank_one is not None:
        return rank_one

    norm = float(np.max(np.abs(values), initial=0.0))
    weights = schmidt_weight_table(vectors, X.dims.n, X.dims.m)
    uppers: Dict[str, float] = {"upper:operator_norm": norm}
    for h in range(1, k + 1):
        uppers[f"upper:spectral_h{h}"] = k / h * float(np.sum(np.abs(values) * weights[:, h - 1]))

    lowers: Dict[str, float] = {"lower:operator_norm_floor": operator_norm_floor(X, k, norm)}
    # ||X||_S(k) >= ||X||_S(h), so every smaller rank contributes
    for h in range(1, k + 1):
        eig_value, eig_r = op_norm_lower_eig_best(X, h, values)
        lowers[f"lower:eigenvalue_h{h}_r{eig_r}"] = eig_value
    if is_projection(X):
        lowers["lower:projection"] = projection_lower_bounds(X, k)

    witness = None
    tol = POSITIVE_TOL * max(1.0, norm)
    if use_heuristic and (values[0] >= -tol or values[-1] <= tol):
        positive = values[0] >= -tol
        target = X if positive else BipartiteOperator(entries=-X.entries, dims=X.dims)
        found = op_norm_heuristic(target, k, restarts=restarts, seed=seed, chain=True, workers=workers)
        lowers["lower:heuristic"] = found.lower
        if positive:
            witness = found.lower_witness

    upper_rule = min(uppers, key=uppers.get)
    lower_rule = max(lowers, key=lowers.get)
    upper, lower = uppers[upper_rule], lowers[lower_rule]
    if lower_rule != "lower:heuristic":
        witness = None
    upper = max(upper, lower)
    logger.info(f"||X||_S({k}) in [{lower:.12g}, {upper:.12g}] via {lower_rule}, {upper_rule}")
    return NormBounds(k=k, lower=lower, upper=upper, lower_witness=witness, methods=[lower_rule, upper_rule])
