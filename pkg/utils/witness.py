# utils/witness.py - k-block positivity tests, witness search and the certify pipeline
import functools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import (
    DEFAULT_SEED, EIGEN_CLUSTER_RTOL, HEURISTIC_RESTARTS, STRICT_MARGIN, WITNESS_TOL,
)
from models.linalg import BipartiteOperator, PureState, SpectralSplit
from models.norms import Interval
from models.verdicts import KrausDecomposition, Verdict, VerdictStatus
from utils.errors import DistinctEigenvalueError
from utils.linalg import (
    distinct_eigenvalues, expectation, hermitian_eigh, hermitian_spectral_split, require_hermitian,
)
from utils.opnorm import op_norm_bounds, op_norm_heuristic, rank_projection_bounds, schmidt_weight_table
from utils.schmidt import truncate_to_schmidt_rank

logger = logging.getLogger(__name__)

POSITIVE = VerdictStatus.K_BLOCK_POSITIVE
NEGATIVE = VerdictStatus.NOT_K_BLOCK_POSITIVE
INCONCLUSIVE = VerdictStatus.INCONCLUSIVE


def _margin(split: SpectralSplit) -> float:
    return STRICT_MARGIN * max(1.0, float(np.max(np.abs(split.eigenvalues), initial=0.0)))


def _operator(entries: np.ndarray, like: BipartiteOperator) -> BipartiteOperator:
    return BipartiteOperator(entries=(entries + entries.conj().T) / 2, dims=like.dims)


def _unit_scaled(
    X: BipartiteOperator, split: Optional[SpectralSplit] = None,
) -> Tuple[BipartiteOperator, SpectralSplit, float]:
    """X / ||X|| with its spectral split and ||X||; the zero operator and unit-norm input pass through."""
    require_hermitian(X)
    split = split or hermitian_spectral_split(X)
    scale = float(np.max(np.abs(split.eigenvalues), initial=0.0))
    if scale == 0.0 or abs(scale - 1.0) <= 1e-12:
        return X, split, 1.0
    unit = BipartiteOperator(entries=X.entries / scale, dims=X.dims)
    return unit, hermitian_spectral_split(unit), scale


def _rescaled(verdict: Verdict, X: BipartiteOperator, scale: float) -> Verdict:
    if scale == 1.0:
        return verdict
    update = {"details": {**verdict.details, "scale": scale}}
    if verdict.witness is not None:
        update["witness_value"] = expectation(X, verdict.witness)
    return verdict.model_copy(update=update)


def scale_free(test):
    """Run a test on X / ||X|| so tolerances are relative; witness values are reported for X.

    Intervals and details of the returned verdict refer to X / ||X||, and
    details["scale"] holds ||X|| whenever it differs from 1.
    """

    @functools.wraps(test)
    def run(X: BipartiteOperator, k: int, *args, split: Optional[SpectralSplit] = None, **kwargs) -> Verdict:
        unit, unit_split, scale = _unit_scaled(X, split)
        return _rescaled(test(unit, k, *args, split=unit_split, **kwargs), X, scale)

    return run


def _checked_witness(X: BipartiteOperator, candidate: Optional[PureState]):
    """(witness, value) when <v|X|v> < -WITNESS_TOL, else (None, None)."""
    if candidate is None:
        return None, None
    value = expectation(X, candidate)
    if value < -WITNESS_TOL:
        return candidate, value
    return None, None


def _truncated_state(X: BipartiteOperator, amplitudes: np.ndarray, k: int) -> PureState:
    vector, _ = truncate_to_schmidt_rank(amplitudes, X.dims.n, X.dims.m, k)
    return PureState.from_amplitudes(vector, X.dims.n, X.dims.m, normalize=True)


def _witness_for(
    X: BipartiteOperator, k: int, candidates: Sequence[Optional[PureState]], restarts: int, seed,
):
    """First candidate that is a witness for X, falling back to the heuristic search."""
    for candidate in candidates:
        witness, value = _checked_witness(X, candidate)
        if witness is not None:
            return witness, value
    found = find_negative_witness(X, k, restarts, seed)
    if found is None:
        return None, None
    return found, expectation(X, found)


def _nonpositive_verdict(X: BipartiteOperator, k: int, rule: str) -> Verdict:
    """X <= 0: zero is k-block positive, anything else fails on a product basis state."""
    diagonal = np.real(np.diag(X.entries))
    if not np.any(X.entries):
        return Verdict(status=POSITIVE, k=k, rule=f"{rule}:zero_operator")
    idx = int(np.argmin(diagonal))
    basis = np.zeros(X.side, dtype=complex)
    basis[idx] = 1.0
    witness, value = _checked_witness(X, PureState.from_amplitudes(basis, X.dims.n, X.dims.m))
    if witness is None:
        return Verdict(status=INCONCLUSIVE, k=k, rule=rule, details={"min_diagonal": float(diagonal[idx])})
    return Verdict(status=NEGATIVE, k=k, rule=f"{rule}:nonpositive", witness=witness, witness_value=value)


# ---------------------------------------------------------------------------
# Single tests
# ---------------------------------------------------------------------------

def kuah_sudarshan_test(kd: KrausDecomposition, k: int) -> Verdict:
    """A negative Kraus operator of rank <= k rules out k-positivity of the map.

    When no eligible term clears the witness tolerance, the Inconclusive
    verdict records the largest eligible magnitude relative to ||C||.
    """
    n, m = kd.n, kd.m
    choi = BipartiteOperator.from_matrix(kd.choi(), n, m)
    k = choi.dims.check_k(k)
    unit, _, scale = _unit_scaled(choi)
    eligible = [(index, term) for index, term in enumerate(kd.negative_ops) if term.rank <= k]
    for index, term in eligible:
        # eigenvector of the Choi matrix behind F_i
        witness, _ = _checked_witness(unit, _truncated_state(unit, term.operator.T.reshape(-1), k))
        if witness is not None:
            return Verdict(
                status=NEGATIVE, k=k, rule="kuah_sudarshan", witness=witness,
                witness_value=expectation(choi, witness),
                details={"kraus_index": float(index), "kraus_rank": float(term.rank)},
            )
    details = {"negative_terms": float(len(kd.negative_ops)), "eligible_terms": float(len(eligible))}
    if eligible:
        details["max_eligible_magnitude"] = max(abs(term.weight) for _, term in eligible) / n / scale
        details["witness_tol"] = WITNESS_TOL
        logger.debug(f"kuah_sudarshan k={k}: {len(eligible)} eligible terms all below the witness tolerance")
    return Verdict(status=INCONCLUSIVE, k=k, rule="kuah_sudarshan", details=details)


@scale_free
def negative_count_test(X: BipartiteOperator, k: int, split: Optional[SpectralSplit] = None) -> Verdict:
    """More than (n-k)(m-k) negative eigenvalues rules out k-block positivity."""
    k = X.dims.check_k(k)
    limit = (X.dims.n - k) * (X.dims.m - k)
    count = split.negative_count
    details = {"limit": float(limit)}
    if count > limit:
        return Verdict(status=NEGATIVE, k=k, rule="negative_count", negative_count=count, details=details)
    return Verdict(status=INCONCLUSIVE, k=k, rule="negative_count", negative_count=count, details=details)


@scale_free
def eigenvalue_ratio_test(X: BipartiteOperator, k: int, split: Optional[SpectralSplit] = None) -> Verdict:
    """lambda_min / lambda_max against 1 - m/k and the two rank-dependent refinements."""
    k = X.dims.check_k(k)
    values = split.eigenvalues
    if values.size == 0 or values[-1] <= split.tol_zero:
        return _nonpositive_verdict(X, k, "eigenvalue_ratio")

    n, m = X.dims.n, X.dims.m
    small = X.dims.max_rank
    ratio = float(values[0] / values[-1])
    thresholds = {"ratio_bound": 1.0 - small / k}
    count = split.negative_count
    if count > 0:
        bounds = rank_projection_bounds(n, m, count, k)
        thresholds["ratio_bound_rank_ineq1"] = float(1 - 1 / bounds.ineq1)
        thresholds["ratio_bound_rank_ineq2"] = float(1 - 1 / bounds.ineq2)

    name = max(thresholds, key=thresholds.get)
    details = {"ratio": ratio, **thresholds}
    if ratio < thresholds[name] - STRICT_MARGIN:
        return Verdict(status=NEGATIVE, k=k, rule=f"eigenvalue_ratio:{name}", negative_count=count, details=details)
    return Verdict(status=INCONCLUSIVE, k=k, rule="eigenvalue_ratio", details=details)


@scale_free
def spectral_test(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    seed=DEFAULT_SEED,
    split: Optional[SpectralSplit] = None,
) -> Verdict:
    """Spectral conditions for k-block positivity, decided from one-sided norm bounds only."""
    k = X.dims.check_k(k)
    margin = _margin(split)
    n, m = X.dims.n, X.dims.m

    if split.negative_count == 0:
        return Verdict(status=POSITIVE, k=k, rule="spectral:condition2", details={"norm_X_neg_upper": 0.0})

    # condition (1): ||P^-||_S(k) = 1
    limit = (n - k) * (m - k)
    p_bounds = op_norm_bounds(split.proj_neg, k, restarts=restarts, seed=seed)
    witness, value = None, None
    if p_bounds.lower >= 1.0 - 1e-9:
        witness, value = _checked_witness(X, p_bounds.lower_witness)
    if split.negative_count > limit:
        return Verdict(
            status=NEGATIVE, k=k, rule="spectral:condition1_count", witness=witness, witness_value=value,
            negative_count=split.negative_count, details={"limit": float(limit)},
        )
    if witness is not None:
        return Verdict(status=NEGATIVE, k=k, rule="spectral:condition1", witness=witness, witness_value=value)

    # condition (2): upper bounds only
    q_bounds = op_norm_bounds(_operator(split.proj_zero.entries + split.proj_neg.entries, X), k,
                              use_heuristic=False)
    weights = schmidt_weight_table(np.hstack([split.zero_vectors, split.negative_vectors]), n, m)
    u = min(q_bounds.upper, min(k / h * float(np.sum(weights[:, h - 1])) for h in range(1, k + 1)))
    w = op_norm_bounds(split.neg_part, k, use_heuristic=False).upper
    intervals = {
        "norm_P_neg": p_bounds.interval,
        "norm_P_zero_plus_neg": Interval(lower=min(q_bounds.lower, u), upper=u),
        "norm_X_neg": Interval(lower=0.0, upper=w),
    }
    lambda_plus = split.positive_values
    if u < 1.0 - margin and lambda_plus.size and float(lambda_plus.min()) >= w / (1.0 - u) + margin:
        return Verdict(status=POSITIVE, k=k, rule="spectral:condition2", intervals=intervals,
                       details={"u": u, "w": w, "min_positive": float(lambda_plus.min())})

    # condition (3): nonsingular X with a single negative eigenvalue
    negatives = distinct_eigenvalues(split.negative_values)
    if split.zero_count == 0 and len(negatives) == 1 and lambda_plus.size:
        u_prime = p_bounds.upper
        p_prime = p_bounds.lower
        w_prime = abs(negatives[0][0]) * p_prime
        if u_prime < 1.0 - margin and p_prime < 1.0:
            threshold = w_prime / (1.0 - p_prime)
            if float(lambda_plus.max()) < threshold - margin:
                candidates = [p_bounds.lower_witness]
                candidates += [_truncated_state(X, vector, k) for vector in split.negative_vectors.T]
                witness, value = _witness_for(X, k, candidates, restarts, seed)
                return Verdict(
                    status=NEGATIVE, k=k, rule="spectral:condition3", witness=witness, witness_value=value,
                    intervals=intervals, details={"threshold": threshold, "max_positive": float(lambda_plus.max())},
                )

    return Verdict(status=INCONCLUSIVE, k=k, rule="spectral", intervals=intervals)


@scale_free
def two_eigenvalue_test(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    seed=DEFAULT_SEED,
    split: Optional[SpectralSplit] = None,
) -> Verdict:
    """Exact characterization for two distinct eigenvalues: ||P^-||_S(k) <= l1 / (l1 - l2)."""
    k = X.dims.check_k(k)
    clusters = distinct_eigenvalues(split.eigenvalues, EIGEN_CLUSTER_RTOL)
    if len(clusters) != 2:
        raise DistinctEigenvalueError(f"expected exactly 2 distinct eigenvalues, found {len(clusters)}")
    (low, low_count), (high, _) = clusters
    if low >= -split.tol_zero:
        return Verdict(status=POSITIVE, k=k, rule="two_eigenvalue:positive")
    if high <= split.tol_zero:
        return _nonpositive_verdict(X, k, "two_eigenvalue")

    n, m = X.dims.n, X.dims.m
    margin = _margin(split)
    threshold = high / (high - low)
    details = {"lambda1": high, "lambda2": low, "threshold": threshold}
    low_vectors = split.eigenvectors[:, :low_count]
    projector = _operator(low_vectors @ low_vectors.conj().T, X)
    eigen_candidates = [_truncated_state(X, vector, k) for vector in low_vectors.T]

    if low_count > (n - k) * (m - k):
        witness, value = _witness_for(X, k, eigen_candidates, restarts, seed)
        return Verdict(status=NEGATIVE, k=k, rule="two_eigenvalue:rank", witness=witness, witness_value=value,
                       negative_count=low_count, details=details)

    if low_count == 1:
        weights = schmidt_weight_table(low_vectors, n, m)
        exact = float(weights[0, k - 1])
        details["norm_P_neg"] = exact
        if exact <= threshold + margin:
            return Verdict(status=POSITIVE, k=k, rule="two_eigenvalue:exact", details=details)
        witness, value = _witness_for(X, k, eigen_candidates, restarts, seed)
        return Verdict(status=NEGATIVE, k=k, rule="two_eigenvalue:exact", witness=witness,
                       witness_value=value, details=details)

    bounds = op_norm_bounds(projector, k, restarts=restarts, seed=seed)
    intervals = {"norm_P_neg": bounds.interval}
    if bounds.upper <= threshold + margin:
        return Verdict(status=POSITIVE, k=k, rule="two_eigenvalue:bounds", intervals=intervals, details=details)
    if bounds.lower > threshold + margin:
        witness, value = _witness_for(X, k, [bounds.lower_witness] + eigen_candidates, restarts, seed)
        return Verdict(status=NEGATIVE, k=k, rule="two_eigenvalue:bounds", witness=witness,
                       witness_value=value, intervals=intervals, details=details)
    return Verdict(status=INCONCLUSIVE, k=k, rule="two_eigenvalue", intervals=intervals, details=details)


def find_negative_witness(
    X: BipartiteOperator, k: int, restarts: int = HEURISTIC_RESTARTS, seed=DEFAULT_SEED,
) -> Optional[PureState]:
    """Search for v with SR(v) <= k and <v|X|v> < -WITNESS_TOL * ||X|| by maximizing <v|(I - X/||X||)|v>."""
    require_hermitian(X)
    k = X.dims.check_k(k)
    c = float(np.max(np.abs(hermitian_eigh(X.entries, eigvals_only=True)), initial=0.0))
    if c == 0.0:
        return None
    unit = _operator(X.entries / c, X)
    shifted = _operator(np.eye(X.side) - unit.entries, X)
    found = op_norm_heuristic(shifted, k, restarts=restarts, seed=seed, chain=True)
    witness, value = _checked_witness(unit, found.lower_witness)
    if witness is not None:
        logger.info(f"negative witness found: <v|X|v> = {value * c:.6g} with SR <= {k}")
    return witness


@scale_free
def shifted_norm_test(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    seed=DEFAULT_SEED,
    split: Optional[SpectralSplit] = None,
) -> Verdict:
    """X is k-block positive iff ||cI - X||_S(k) <= c, with c = lambda_max(X)."""
    k = X.dims.check_k(k)
    c = float(split.eigenvalues[-1])
    if c <= split.tol_zero:
        return _nonpositive_verdict(X, k, "shifted_norm")
    margin = _margin(split)
    shifted = _operator(c * np.eye(X.side) - X.entries, X)
    bounds = op_norm_bounds(shifted, k, restarts=restarts, seed=seed)
    intervals = {"norm_shifted": bounds.interval}
    details = {"c": c}
    if bounds.upper <= c:
        return Verdict(status=POSITIVE, k=k, rule="shifted_norm", intervals=intervals, details=details)
    if bounds.lower > c + margin:
        witness, value = _checked_witness(X, bounds.lower_witness)
        return Verdict(status=NEGATIVE, k=k, rule="shifted_norm", witness=witness, witness_value=value,
                       intervals=intervals, details=details)
    return Verdict(status=INCONCLUSIVE, k=k, rule="shifted_norm", intervals=intervals, details=details)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

@scale_free
def certify(
    X: BipartiteOperator,
    k: int,
    restarts: int = HEURISTIC_RESTARTS,
    seed=DEFAULT_SEED,
    split: Optional[SpectralSplit] = None,
) -> Verdict:
    """Run the tests in order and return the first decisive verdict.

    Order: positivity shortcut, negative count, two-eigenvalue (when it
    applies), spectral conditions, eigenvalue ratio, shifted norm, witness
    search. An Inconclusive result merges every sub-test's intervals. The
    verdict kind does not depend on the scale of X.
    """
    k = X.dims.check_k(k)
    diagnostics: List[Dict[str, str]] = []
    intervals = {}

    def finish(verdict: Verdict) -> Verdict:
        diagnostics.append(verdict.summary())
        logger.info(f"certify k={k}: {verdict.status.value} via {verdict.rule}")
        return verdict.model_copy(update={"diagnostics": list(diagnostics)})

    if split.negative_count == 0:
        return finish(Verdict(status=POSITIVE, k=k, rule="positive_semidefinite"))

    steps = [lambda: negative_count_test(X, k, split=split)]
    if len(distinct_eigenvalues(split.eigenvalues)) == 2:
        steps.append(lambda: two_eigenvalue_test(X, k, restarts, seed, split=split))
    steps += [
        lambda: spectral_test(X, k, restarts, seed, split=split),
        lambda: eigenvalue_ratio_test(X, k, split=split),
        lambda: shifted_norm_test(X, k, restarts, seed, split=split),
    ]
    for step in steps:
        verdict = step()
        if verdict.decisive:
            return finish(verdict)
        diagnostics.append(verdict.summary())
        intervals.update(verdict.intervals)

    witness = find_negative_witness(X, k, restarts, seed)
    if witness is not None:
        return finish(Verdict(status=NEGATIVE, k=k, rule="negative_witness_search",
                              witness=witness, witness_value=expectation(X, witness)))
    diagnostics.append({"rule": "negative_witness_search", "status": INCONCLUSIVE.value})
    return Verdict(status=INCONCLUSIVE, k=k, rule="certify", intervals=intervals, diagnostics=diagnostics)
