# utils/werner.py - Werner states, the P_r^- family and the limit report
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal
from fractions import Fraction
from functools import reduce
from typing import List, Optional

import numpy as np

from config import (
    DEFAULT_SEED, HEURISTIC_RESTARTS, RATIONAL_LIMIT_BITS, SIZE_CAP, TEXT_SIG_DIGITS, WERNER_FLAG_MIN_N,
)
from models.linalg import BipartiteOperator
from models.werner import LimitReportRow, NegProjectorFamily, WernerParams
from models.verdicts import VerdictStatus
from utils.errors import DistinctEigenvalueError, RankOutOfRangeError, SizeCapExceededError
from utils.linalg import maximally_entangled_projector, permute_to_bipartite, swap_operator
from utils.opnorm import op_norm_heuristic, rank_projection_bounds
from utils.witness import two_eigenvalue_test

logger = logging.getLogger(__name__)

FLAG_SLACK = 1e-9


def _check_family(n: int, r: int):
    if n < 2:
        raise ValueError(f"local dimension n must be at least 2, got {n}")
    if r < 1:
        raise ValueError(f"tensor power r must be at least 1, got {r}")


def _check_size(n: int, r: int, size_cap: int):
    side = n ** (2 * r)
    if side > size_cap:
        raise SizeCapExceededError(f"n^(2r) = {side} exceeds the size cap {size_cap}")


def werner_state(p: WernerParams) -> BipartiteOperator:
    """rho_alpha = (I - alpha SWAP) / (n^2 - alpha n)."""
    n = p.n
    entries = (np.eye(n * n) - p.alpha * swap_operator(n).entries) / p.normalization
    return BipartiteOperator.from_matrix(entries, n, n)


def werner_pt(p: WernerParams) -> BipartiteOperator:
    """rho_alpha^Gamma = (I - alpha n E) / (n^2 - alpha n)."""
    n = p.n
    entries = (np.eye(n * n) - p.alpha * n * maximally_entangled_projector(n).entries) / p.normalization
    return BipartiteOperator.from_matrix(entries.real, n, n)


def werner_is_ppt(p: WernerParams) -> bool:
    return p.alpha <= 1.0 / p.n


def werner_pt_kpos(p: WernerParams, k: int, cross_check: bool = True) -> bool:
    """Whether rho_alpha^Gamma is k-block positive, i.e. alpha <= 1/k."""
    if k < 1 or k > p.n:
        raise RankOutOfRangeError(f"k={k} out of range: need 1 <= k <= n = {p.n}")
    result = p.alpha <= 1.0 / k
    if cross_check and p.n <= 4 and p.alpha != 0:
        scaled = BipartiteOperator.from_matrix(werner_pt(p).entries * p.normalization, p.n, p.n)
        try:
            verdict = two_eigenvalue_test(scaled, k)
        except DistinctEigenvalueError:
            verdict = None
        if verdict is not None and verdict.decisive:
            agrees = (verdict.status == VerdictStatus.K_BLOCK_POSITIVE) == result
            if not agrees:
                logger.warning(
                    f"Werner n={p.n} alpha={p.alpha} k={k}: analytic {result} "
                    f"but spectral test says {verdict.status.value}"
                )
    return result


def neg_projector_rank(n: int, r: int) -> int:
    """rank(P_r^-) = (n^(2r) - (n^2 - 2)^r) / 2, exact."""
    _check_family(n, r)
    return (n ** (2 * r) - (n * n - 2) ** r) // 2


def neg_projector_rank_recurrence(n: int, r: int) -> int:
    """Same rank via rank(P_r^-) = rank(P_{r-1}^+) + (n^2 - 1) rank(P_{r-1}^-)."""
    _check_family(n, r)
    minus, plus = 1, n * n - 1
    for _ in range(2, r + 1):
        minus, plus = plus + (n * n - 1) * minus, minus + (n * n - 1) * plus
    return minus


def build_neg_projector(n: int, r: int, size_cap: int = SIZE_CAP) -> NegProjectorFamily:
    """Materialize P_r^- on H_{n^r} (x) H_{n^r} through
    P_r^- = E (x) P_{r-1}^+ + (I - E) (x) P_{r-1}^-."""
    _check_family(n, r)
    _check_size(n, r, size_cap)
    e = maximally_entangled_projector(n).entries.real
    complement = np.eye(n * n) - e
    minus, plus = e, complement
    for _ in range(2, r + 1):
        minus, plus = np.kron(e, plus) + np.kron(complement, minus), np.kron(e, minus) + np.kron(complement, plus)
    projector = permute_to_bipartite(minus, n)
    logger.debug(f"materialized P_{r}^- for n={n}: side {projector.side}")
    return NegProjectorFamily(n=n, r=r, rank=neg_projector_rank(n, r), projector=projector)


def werner_norm_lower_bound_exact(n: int, r: int) -> Fraction:
    """(n^(2r) + (n^r - 2)(n^(2r) - (n^2-2)^r)/2) / (n^(2r) (n^r - 1)) as a Fraction."""
    _check_family(n, r)
    side = n ** r
    square = side * side
    numerator = Fraction(square) + Fraction(side - 2, 2) * (square - (n * n - 2) ** r)
    return numerator / (square * (side - 1))


def werner_norm_lower_bound(n: int, r: int) -> float:
    """Projection lower bound on ||P_r^-||_S(2); exact rational while n^(2r) < 2^128."""
    _check_family(n, r)
    if n ** (2 * r) < 2 ** RATIONAL_LIMIT_BITS:
        return float(werner_norm_lower_bound_exact(n, r))
    # (2a + (1 - 2a)(1 - q)) / (2(1 - a)) with a = n^-r and q = ((n^2 - 2)/n^2)^r
    a = math.exp(-r * math.log(n))
    one_minus_q = -math.expm1(r * math.log1p(-2.0 / (n * n)))
    return (2 * a + (1 - 2 * a) * one_minus_q) / (2 * (1 - a))


def _limit_row(n: int, r: int, heuristic_budget: int, size_cap: int, seed) -> LimitReportRow:
    rank = neg_projector_rank(n, r)
    side = n ** r
    bound_ineq2 = werner_norm_lower_bound(n, r)
    bound_ineq1 = float(rank_projection_bounds(side, side, rank, 2).ineq1)
    heuristic, witness = None, None
    if n ** (2 * r) <= size_cap:
        family = build_neg_projector(n, r, size_cap)
        found = op_norm_heuristic(family.projector, 2, restarts=heuristic_budget, seed=seed, chain=True)
        heuristic, witness = found.lower, found.lower_witness
    certified = [bound_ineq2, bound_ineq1] + ([heuristic] if heuristic is not None else [])
    flagged = n >= WERNER_FLAG_MIN_N and max(certified) > 0.5 + FLAG_SLACK
    if flagged:
        logger.warning(f"n={n}, r={r}: certified lower bound {max(certified):.12g} exceeds 1/2")
    return LimitReportRow(
        r=r, rank=rank, bound_ineq2=bound_ineq2, bound_ineq1=bound_ineq1,
        heuristic=heuristic, flagged=flagged, witness=witness,
    )


def werner_limit_report(
    n: int,
    r_max: int,
    heuristic_budget: int = HEURISTIC_RESTARTS,
    size_cap: int = SIZE_CAP,
    seed=DEFAULT_SEED,
    workers: Optional[int] = None,
) -> List[LimitReportRow]:
    """Lower bounds on ||P_r^-||_S(2) for r = 1..r_max against the 1/2 threshold."""
    _check_family(n, r_max)

    def row(r):
        return _limit_row(n, r, heuristic_budget, size_cap, seed)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, range(1, r_max + 1)))
    else:
        rows = [row(r) for r in range(1, r_max + 1)]
    logger.info(f"limit report for n={n}: {r_max} rows, {sum(r.flagged for r in rows)} flagged")
    return rows


def _format_number(value: Optional[float]) -> str:
    if value is None:
        return "-"
    return f"{value:.{TEXT_SIG_DIGITS}g}"


def _format_count(value: int) -> str:
    if value < 10 ** 12:
        return str(value)
    return f"{Decimal(value):.{TEXT_SIG_DIGITS - 1}E}"


def format_limit_report(rows: List[LimitReportRow]) -> str:
    """Aligned plain-text table of a limit report."""
    header = ["r", "rank", "bound_ineq2", "bound_ineq1", "heuristic", "threshold", "flag"]
    table = [header] + [
        [
            str(row.r), _format_count(row.rank), _format_number(row.bound_ineq2),
            _format_number(row.bound_ineq1), _format_number(row.heuristic),
            _format_number(row.threshold), "!" if row.flagged else "",
        ]
        for row in rows
    ]
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(line, widths)).rstrip() for line in table]
    return "\n".join(lines)


def tensor_power_pt(p: WernerParams, r: int, size_cap: int = SIZE_CAP) -> BipartiteOperator:
    """(rho_alpha^Gamma)^{(x) r} regrouped onto H_{n^r} (x) H_{n^r}."""
    _check_family(p.n, r)
    _check_size(p.n, r, size_cap)
    base = werner_pt(p).entries
    power = reduce(np.kron, [base] * r)
    return permute_to_bipartite(power, p.n)
