# cli.py - Command-line front end: vecnorm, opnorm, kpos, werner, werner-limit, schmidt
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from config import (
    BRUTEFORCE_SAMPLES, DEFAULT_SEED, HEURISTIC_MAX_ITERS, HEURISTIC_RESTARTS, SCHMIDT_RANK_TOL, SIZE_CAP,
    TEXT_SIG_DIGITS,
)
from models.werner import WernerParams
from repository.matrix_files import MatrixFileRepo
from utils.errors import NumericalFailure
from utils.linalg import hermitian_eigh
from utils.opnorm import op_norm_bounds, op_norm_bruteforce, op_norm_heuristic
from utils.schmidt import schmidt_coefficients, schmidt_decompose, vector_k_norm
from utils.werner import format_limit_report, werner_is_ppt, werner_limit_report, werner_pt, werner_pt_kpos
from utils.witness import certify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _fmt(value: float) -> str:
    return f"{value:.{TEXT_SIG_DIGITS}g}"


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# ---------------------------------------------------------------------------
# Subcommands: each returns {"result": json-ready value, "text": rendering}
# ---------------------------------------------------------------------------

def cmd_vecnorm(args) -> Dict[str, Any]:
    state = MatrixFileRepo.load_state(args.input, normalize=args.normalize)
    norm = vector_k_norm(state, args.k)
    coefficients = schmidt_coefficients(state.amplitudes, state.dims.n, state.dims.m)
    result = {"k": args.k, "norm": norm, "schmidt_coefficients": [float(c) for c in coefficients]}
    text = "\n".join([
        f"||v||_s({args.k}) = {_fmt(norm)}",
        "Schmidt coefficients: " + " ".join(_fmt(c) for c in coefficients),
    ])
    return {"result": result, "text": text}


def cmd_opnorm(args) -> Dict[str, Any]:
    operator = MatrixFileRepo.load_operator(args.input)
    if args.method == "brute":
        value = op_norm_bruteforce(operator, args.k, samples=args.samples, seed=args.seed)
        result = {"k": args.k, "method": "brute", "lower": value}
        text = f"||X||_S({args.k}) >= {_fmt(value)} (brute force, {args.samples} samples per rank)"
        return {"result": result, "text": text}
    if args.method == "heuristic":
        bounds = op_norm_heuristic(operator, args.k, restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    else:
        bounds = op_norm_bounds(operator, args.k, restarts=args.restarts, seed=args.seed)
    text = f"||X||_S({args.k}) in [{_fmt(bounds.lower)}, {_fmt(bounds.upper)}] via {', '.join(bounds.methods)}"
    return {"result": bounds.model_dump(), "text": text}


def cmd_kpos(args) -> Dict[str, Any]:
    operator = MatrixFileRepo.load_operator(args.input)
    verdict = certify(operator, args.k, restarts=args.restarts, seed=args.seed)
    lines = [f"status: {verdict.status.value}", f"rule: {verdict.rule}"]
    if verdict.witness is not None:
        lines.append(f"witness value: {_fmt(verdict.witness_value)}")
    if verdict.negative_count is not None:
        lines.append(f"negative eigenvalues: {verdict.negative_count}")
    for name, interval in sorted(verdict.intervals.items()):
        lines.append(f"{name}: [{_fmt(interval.lower)}, {_fmt(interval.upper)}]")
    return {"result": verdict.model_dump(mode="json"), "text": "\n".join(lines)}


def cmd_werner(args) -> Dict[str, Any]:
    params = WernerParams(n=args.n, alpha=args.alpha)
    values = hermitian_eigh(werner_pt(params).entries, eigvals_only=True)
    ppt = werner_is_ppt(params)
    ks = [args.k] if args.k is not None else list(range(1, params.n + 1))
    kpos = {k: werner_pt_kpos(params, k) for k in ks}
    result = {
        "n": params.n,
        "alpha": params.alpha,
        "ppt": ppt,
        "pt_min_eigenvalue": float(values[0]),
        "thresholds": {str(k): 1.0 / k for k in ks},
        "k_block_positive": {str(k): v for k, v in kpos.items()},
    }
    lines = [f"n = {params.n}, alpha = {_fmt(params.alpha)}", f"PPT: {str(ppt).lower()}"]
    if args.k is not None:
        lines.append(f"threshold 1/k = {_fmt(1.0 / args.k)}")
        lines.append(f"k-block positive: {str(kpos[args.k]).lower()}")
    else:
        lines += [f"{k}-block positive: {str(v).lower()} (threshold {_fmt(1.0 / k)})" for k, v in kpos.items()]
    return {"result": result, "text": "\n".join(lines)}


def cmd_werner_limit(args) -> Dict[str, Any]:
    rows = werner_limit_report(args.n, args.rmax, heuristic_budget=args.restarts, size_cap=args.size_cap,
                               seed=args.seed)
    result = [row.model_dump(exclude={"witness"}) for row in rows]
    return {"result": result, "text": format_limit_report(rows)}


def cmd_schmidt(args) -> Dict[str, Any]:
    state = MatrixFileRepo.load_state(args.input, normalize=args.normalize)
    decomposition = schmidt_decompose(state, args.tol)
    lines = [f"Schmidt rank: {decomposition.rank}"]
    lines += [f"alpha_{i + 1} = {_fmt(c)}" for i, c in enumerate(decomposition.coefficients)]
    return {"result": decomposition.model_dump(), "text": "\n".join(lines)}


COMMANDS: Dict[str, Callable] = {
    "vecnorm": cmd_vecnorm,
    "opnorm": cmd_opnorm,
    "kpos": cmd_kpos,
    "werner": cmd_werner,
    "werner-limit": cmd_werner_limit,
    "schmidt": cmd_schmidt,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")

    parser = argparse.ArgumentParser(prog="schmidt-norms", description="Schmidt-rank norms and k-block positivity")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vecnorm", parents=[common], help="vector k-norm and Schmidt spectrum")
    p.add_argument("--input", required=True)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("--normalize", action="store_true")

    p = sub.add_parser("opnorm", parents=[common], help="bounds on the S(k) operator norm")
    p.add_argument("--input", required=True)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("--method", choices=["bounds", "heuristic", "brute"], default="bounds")
    p.add_argument("--restarts", type=_non_negative, default=HEURISTIC_RESTARTS)
    p.add_argument("--max-iters", type=_positive, default=HEURISTIC_MAX_ITERS)
    p.add_argument("--samples", type=_positive, default=BRUTEFORCE_SAMPLES)
    p.add_argument("--seed", type=_non_negative, default=DEFAULT_SEED)

    p = sub.add_parser("kpos", parents=[common], help="certify k-block positivity")
    p.add_argument("--input", required=True)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("--restarts", type=_non_negative, default=HEURISTIC_RESTARTS)
    p.add_argument("--seed", type=_non_negative, default=DEFAULT_SEED)

    p = sub.add_parser("werner", parents=[common], help="Werner state thresholds and PPT status")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("-k", type=_positive)

    p = sub.add_parser("werner-limit", parents=[common], help="limit report for ||P_r^-||_S(2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rmax", type=_positive, required=True)
    p.add_argument("--size-cap", type=_positive, default=SIZE_CAP)
    p.add_argument("--restarts", type=_non_negative, default=HEURISTIC_RESTARTS)
    p.add_argument("--seed", type=_non_negative, default=DEFAULT_SEED)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt decomposition")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=SCHMIDT_RANK_TOL)
    p.add_argument("--normalize", action="store_true")
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_BAD_INPUT
    _configure_logging(args.verbose)

    try:
        outcome = COMMANDS[args.command](args)
    except NumericalFailure as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as e:
        print(f"error: file not found: {e.filename}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except json.JSONDecodeError as e:
        print(f"error: malformed JSON input: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.output == "json":
        print(json.dumps(outcome["result"], sort_keys=True, indent=2))
    else:
        print(outcome["text"])
    return EXIT_OK


def main(argv: Optional[List[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
