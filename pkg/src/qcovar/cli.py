"""Command-line interface.

Exit codes: 0 success / extreme, 1 negative verdict, 2 I/O or parse error,
3 validation error, 4 decomposition budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

import numpy as np

from . import __version__
from .config import Tolerances, from_env
from .covariance import center, covariance, expectations, hermiticity_residual
from .decomposition import decompose, verify
from .errors import BudgetExceeded, ValidationError
from .extremality import SANDWICH, SPANNING, check
from .generators import KINDS, fixture
from .io import ParseError, Problem, Solution, load_problem, load_solution, matrix_to_json, write_json

EXIT_OK, EXIT_NEGATIVE, EXIT_IO, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3, 4

log = logging.getLogger("qcovar")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _tolerances(args, problem: Problem | None = None) -> Tolerances:
    tols = from_env()
    if problem is not None and problem.tolerances:
        try:
            tols = tols.updated(problem.tolerances)
        except (TypeError, ValueError) as exc:
            raise _Fail(EXIT_IO, f"bad tolerances in problem file: {exc}") from None
    if getattr(args, "tol", None) is not None:
        tols = tols.with_global(args.tol)
    return tols


def _load(args) -> tuple[Problem, Tolerances]:
    try:
        raw = load_problem(args.input)
    except ParseError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    tols = _tolerances(args, raw)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            prob = raw.validated(tols)
        for w in caught:
            log.warning("%s", w.message)
    except ValidationError as exc:
        raise _Fail(EXIT_INVALID, f"validation failed: {exc}") from None
    prob.meta = dict(raw.meta, k_input=raw.k)
    return prob, tols


def _feasible(prob: Problem, tols: Tolerances, do_center: bool) -> tuple[np.ndarray, list | None]:
    means = expectations(prob.D, prob.X)
    if do_center:
        return center(prob.D, prob.X), [float(m) for m in means]
    worst = float(np.max(np.abs(means)))
    if worst > tols.member:
        raise _Fail(
            EXIT_INVALID,
            f"validation failed: D is not in the feasible set (max |Tr(D X_i)| = {worst:.3g} > "
            f"{tols.member:.3g}); rerun with --center to shift the observables",
        )
    return prob.X, None


def cmd_covariance(args) -> int:
    prob, _ = _load(args)
    xs = prob.X
    out: dict = {}
    if args.center:
        out["shifts"] = [float(m) for m in expectations(prob.D, xs)]
        xs = center(prob.D, xs)
    cov = covariance(prob.D, xs)
    out["k"] = len(xs)
    if args.real:
        out["covariance"] = cov.real.tolist()
        out["hermiticity_residual"] = hermiticity_residual(cov)
        out["max_abs_imag"] = float(np.max(np.abs(cov.imag)))
    else:
        out["covariance"] = matrix_to_json(cov)
    write_json(out, args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    prob, tols = _load(args)
    xs, shifts = _feasible(prob, tols, args.center)
    report = check(prob.D, xs, args.criterion, tols)
    out = report.as_dict()
    if shifts is not None:
        out["shifts"] = shifts
    if args.emit_perturbation and report.perturbation is not None:
        p = report.perturbation
        out["perturbation"] = {
            "S": matrix_to_json(p.S),
            "Q": matrix_to_json(p.Q),
            "trace_S": float(np.trace(p.S).real),
            "max_abs_trace_SX": float(np.max(np.abs(np.einsum("ab,iba->i", p.S, xs)))),
        }
    write_json(out, args.output)
    return EXIT_OK if report.extreme else EXIT_NEGATIVE


def cmd_decompose(args) -> int:
    prob, tols = _load(args)
    xs, shifts = _feasible(prob, tols, args.center)
    try:
        dec = decompose(prob.D, xs, tols)
    except BudgetExceeded as exc:
        node = exc.node
        detail = "" if node is None else f"; offending node diag = {np.diag(node).real.tolist()}"
        raise _Fail(EXIT_BUDGET, f"{exc}{detail}") from None
    sol = Solution(
        weights=dec.weights,
        pieces=dec.pieces,
        ranks=dec.ranks,
        span_ranks=dec.span_ranks,
        residuals=dec.residuals,
        config={"tolerances": tols.as_dict(), "seed": prob.meta.get("seed"),
                "version": __version__},
        shifts=shifts,
    )
    write_json(sol.to_json(), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        d, xs = fixture(args.kind, n=args.n, k=args.k, rank=args.rank, seed=args.seed, m=args.m)
    except ValueError as exc:
        raise _Fail(EXIT_IO, f"invalid parameters: {exc}") from None
    meta = {"kind": args.kind, "n": args.n, "k": args.k, "rank": args.rank, "seed": args.seed,
            "m": args.m}
    write_json(Problem(d, xs, meta={k: v for k, v in meta.items() if v is not None}).to_json(),
               args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    args.input = args.problem
    prob, tols = _load(args)
    try:
        sol = load_solution(args.solution)
    except ParseError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    if sol.pieces.shape[1:] != prob.D.shape:
        raise _Fail(EXIT_INVALID, "validation failed: solution pieces do not match problem size")
    report = verify(prob.D, prob.X, sol.weights, sol.pieces, tols, k=prob.meta["k_input"])
    write_json(report.as_dict(), args.output)
    for name in report.failed():
        log.error("check failed: %s", name)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcovar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, need_input=True):
        if need_input:
            p.add_argument("-i", "--input", required=True, help="problem JSON file")
        p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=None,
                       help="validation/membership tolerance (env QCOVAR_TOL)")

    p = sub.add_parser("covariance", help="compute Var_D(X)")
    io_flags(p)
    p.add_argument("--center", action="store_true", help="shift X_i by Tr(D X_i) first")
    p.add_argument("--real", action="store_true", help="emit real parts only")
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("check", help="decide extremality of D")
    io_flags(p)
    p.add_argument("--center", action="store_true")
    p.add_argument("--criterion", choices=[SPANNING, SANDWICH], default=SPANNING)
    p.add_argument("--emit-perturbation", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="extremal decomposition of D")
    io_flags(p)
    p.add_argument("--center", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="write a fixture problem file")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="independently recheck a solution file")
    p.add_argument("problem")
    p.add_argument("solution")
    io_flags(p, need_input=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="qcovar: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except _Fail as exc:
        log.error("%s", exc)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
