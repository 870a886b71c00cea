"""Command-line interface.

Matrix files are minimal JSON documents::

    {"rows": 2, "cols": 2, "data": [[re, im], [re, im], ...]}

with ``data`` row-major and one [real, imaginary] pair per entry.  All
reports are emitted as JSON with sorted keys so runs diff cleanly.

Exit codes: 0 success, 1 verification-suite failures, 2 parse/validation
error, 3 proven nonexistence, 4 numerical failure, 5 spectral
precondition violated (represent only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .densela import DEFAULT_TOL, Tolerances, frob
from .errors import (
    NonexistentInverseError,
    NumericalError,
    ShapeError,
    SingularMatrixError,
    SpectrumError,
)
from .ginv import drazin_inverse, group_inverse, moore_penrose
from .prescribed import (
    DEFAULT_LAMBDA_SCHEDULE,
    PqProblem,
    diagnose,
    integral_formula,
    limit_formula,
    matrix_with_range_kernel,
    one_two_inverse,
    one_two_inverse_strict,
    outer_inverse,
    outer_inverse_strict,
)
from .verify import fuzz, run_counterexample_suite

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NONEXISTENT = 3
EXIT_NUMERICAL = 4
EXIT_SPECTRUM = 5

RANK_RTOL_ENV = "PQINV_TOL_RANK"


def matrix_to_file_dict(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_file_dict(doc: dict, name: str) -> np.ndarray:
    try:
        rows = int(doc["rows"])
        cols = int(doc["cols"])
        data = doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{name}: malformed matrix file ({exc})") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"{name}: rows and cols must be positive, got {rows}x{cols}")
    if len(data) != rows * cols:
        raise ValueError(
            f"{name}: data length {len(data)} does not match rows*cols = {rows * cols}"
        )
    entries = []
    for pair in data:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"{name}: each entry must be a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ValueError(f"{name}: non-finite entry [{re}, {im}]")
        entries.append(complex(re, im))
    return np.array(entries, dtype=np.complex128).reshape(rows, cols)


def read_matrix(path: str) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"{path}: cannot read ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_file_dict(doc, path)


def write_matrix(path: str, m: np.ndarray):
    Path(path).write_text(
        json.dumps(matrix_to_file_dict(m), sort_keys=True) + "\n", encoding="utf-8"
    )


def _emit(doc: dict):
    print(json.dumps(doc, sort_keys=True, indent=2))


def _tol_dict(tol: Tolerances) -> dict:
    return {
        "rank_rtol": tol.rank_rtol,
        "eq_atol": tol.eq_atol,
        "eq_rtol": tol.eq_rtol,
        "conv_tol": tol.conv_tol,
    }


def _tolerances_from_args(args) -> Tolerances:
    rank_rtol = args.rank_rtol
    if rank_rtol is None:
        env = os.environ.get(RANK_RTOL_ENV)
        rank_rtol = float(env) if env else DEFAULT_TOL.rank_rtol
    return Tolerances(
        rank_rtol=rank_rtol,
        eq_atol=args.eq_atol if args.eq_atol is not None else DEFAULT_TOL.eq_atol,
        eq_rtol=args.eq_rtol if args.eq_rtol is not None else DEFAULT_TOL.eq_rtol,
        conv_tol=args.conv_tol if args.conv_tol is not None else DEFAULT_TOL.conv_tol,
    )


def _add_tol_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--rank-rtol", type=float, default=None,
                        help=f"numerical-rank cutoff (default {DEFAULT_TOL.rank_rtol}; "
                             f"env {RANK_RTOL_ENV} overrides)")
    parser.add_argument("--eq-atol", type=float, default=None,
                        help=f"absolute equality tolerance (default {DEFAULT_TOL.eq_atol})")
    parser.add_argument("--eq-rtol", type=float, default=None,
                        help=f"relative equality tolerance (default {DEFAULT_TOL.eq_rtol})")
    parser.add_argument("--conv-tol", type=float, default=None,
                        help=f"convergence tolerance (default {DEFAULT_TOL.conv_tol})")


def _load_problem(args, tol: Tolerances) -> PqProblem:
    if not args.p_file or not args.q_file:
        raise ValueError("this operation needs p and q matrix files")
    a = read_matrix(args.a_file)
    p = read_matrix(args.p_file)
    q = read_matrix(args.q_file)
    return PqProblem(a, p, q, tol)


def _cmd_check(args) -> int:
    tol = _tolerances_from_args(args)
    prob = _load_problem(args, tol)
    report = diagnose(prob)
    _emit(report.to_json_dict())
    return EXIT_OK


_PQ_KINDS = {
    "2l": outer_inverse,
    "2": outer_inverse_strict,
    "12l": one_two_inverse,
    "12": one_two_inverse_strict,
}


def _cmd_compute(args) -> int:
    tol = _tolerances_from_args(args)
    doc: dict = {"kind": args.kind, "tolerances": _tol_dict(tol)}
    if args.kind in _PQ_KINDS:
        prob = _load_problem(args, tol)
        result = _PQ_KINDS[args.kind](prob, route=args.route)
        matrix = result.b
        doc["route"] = result.route
        doc["residuals"] = {k: float(v) for k, v in sorted(result.residuals.items())}
    elif args.kind == "mp":
        a = read_matrix(args.a_file)
        matrix = moore_penrose(a, tol)
        doc["route"] = "direct"
        doc["residuals"] = {
            "penrose_1": frob(a @ matrix @ a - a),
            "penrose_2": frob(matrix @ a @ matrix - matrix),
        }
    elif args.kind == "group":
        a = read_matrix(args.a_file)
        matrix = group_inverse(a, tol)
        if matrix is None:
            raise NonexistentInverseError("no group inverse: rank(a²) < rank(a)")
        doc["route"] = "direct"
        doc["residuals"] = {
            "inner": frob(a @ matrix @ a - a),
            "outer": frob(matrix @ a @ matrix - matrix),
            "commute": frob(a @ matrix - matrix @ a),
        }
    elif args.kind == "drazin":
        a = read_matrix(args.a_file)
        dz = drazin_inverse(a, tol)
        matrix = dz.inverse
        doc["route"] = "direct"
        doc["index"] = dz.index
        doc["residuals"] = {
            "outer": frob(matrix @ a @ matrix - matrix),
            "commute": frob(a @ matrix - matrix @ a),
        }
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kind {args.kind}")

    doc["matrix"] = matrix_to_file_dict(matrix)
    if args.out:
        write_matrix(args.out, matrix)
        doc["out"] = args.out
    _emit(doc)
    return EXIT_OK


def _cmd_represent(args) -> int:
    tol = _tolerances_from_args(args)
    prob = _load_problem(args, tol)
    w = matrix_with_range_kernel(prob.p, prob.q, tol)
    reference = outer_inverse(prob).b

    rows: list[str] = []
    if args.method == "limit":
        lam_min = args.lambda_min
        schedule = [s for s in DEFAULT_LAMBDA_SCHEDULE if s >= lam_min]
        if not schedule or schedule[-1] > lam_min:
            schedule.append(lam_min)
        final, trace = limit_formula(prob.a, w, schedule, tol)
        rows.append("lambda,cauchy_error")
        for lam, err in trace:
            rows.append(f"{lam!r},{err!r}")
    else:
        final = None
        previous = None
        horizons = [args.horizon / 2 ** k for k in reversed(range(4))] if args.horizon else [None]
        rows.append("horizon,cauchy_error,tail_bound")
        for horizon in horizons:
            try:
                estimate, tail = integral_formula(
                    prob.a, w, horizon=horizon, steps=args.steps, tol=tol
                )
            except ValueError:
                if horizon == horizons[-1]:
                    raise  # the requested horizon itself is too short
                continue  # sweep point below the minimum horizon, skip the row
            err = frob(estimate - previous) if previous is not None else float("nan")
            used = horizon if horizon is not None else float("nan")
            rows.append(f"{used!r},{err!r},{tail!r}")
            previous = estimate
            final = estimate

    drift = frob(final - reference)
    if drift > tol.conv_tol * max(1.0, frob(reference)):
        raise NumericalError(
            f"representation drifts from the direct value by {drift:.3e}"
        )
    rows.append(
        f"# tolerances: rank_rtol={tol.rank_rtol!r} eq_atol={tol.eq_atol!r} "
        f"eq_rtol={tol.eq_rtol!r} conv_tol={tol.conv_tol!r}"
    )
    print("\n".join(rows))
    if args.out:
        write_matrix(args.out, final)
    return EXIT_OK


def _cmd_verify_cases(args) -> int:
    tol = _tolerances_from_args(args)
    report = run_counterexample_suite(tol)
    _emit(report.to_json_dict())
    return EXIT_OK if report.ok else EXIT_SUITE_FAILURE


def _cmd_fuzz(args) -> int:
    tol = _tolerances_from_args(args)
    report = fuzz(args.seed, args.trials, args.dim, tol)
    _emit(report.to_json_dict())
    return EXIT_OK if report.ok else EXIT_SUITE_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqinv",
        description="Generalized inverses with prescribed idempotents.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    check = subparsers.add_parser("check", help="existence diagnostics as JSON")
    check.add_argument("a_file")
    check.add_argument("p_file")
    check.add_argument("q_file")
    _add_tol_flags(check)
    check.set_defaults(fn=_cmd_check)

    compute = subparsers.add_parser("compute", help="compute an inverse")
    compute.add_argument("a_file")
    compute.add_argument("p_file", nargs="?", default=None)
    compute.add_argument("q_file", nargs="?", default=None)
    compute.add_argument("--kind", required=True,
                         choices=["2l", "2", "12l", "12", "group", "drazin", "mp"])
    compute.add_argument("--route", default="group",
                         choices=["group", "inner", "limit", "integral"])
    compute.add_argument("--out", default=None, help="write the result matrix file here")
    _add_tol_flags(compute)
    compute.set_defaults(fn=_cmd_compute)

    represent = subparsers.add_parser(
        "represent", help="convergence trace of the limit or integral representation"
    )
    represent.add_argument("a_file")
    represent.add_argument("p_file")
    represent.add_argument("q_file")
    represent.add_argument("--method", required=True, choices=["limit", "integral"])
    represent.add_argument("--lambda-min", type=float, default=1e-8)
    represent.add_argument("--horizon", type=float, default=None)
    represent.add_argument("--steps", type=int, default=None)
    represent.add_argument("--out", default=None, help="write the final matrix file here")
    _add_tol_flags(represent)
    represent.set_defaults(fn=_cmd_represent)

    verify_cmd = subparsers.add_parser(
        "verify", help="run the built-in counterexample suite"
    )
    _add_tol_flags(verify_cmd)
    verify_cmd.set_defaults(fn=_cmd_verify_cases)

    fuzz_cmd = subparsers.add_parser("fuzz", help="run the randomized invariant suite")
    fuzz_cmd.add_argument("--seed", type=int, default=42)
    fuzz_cmd.add_argument("--trials", type=int, default=100)
    fuzz_cmd.add_argument("--dim", type=int, default=8)
    _add_tol_flags(fuzz_cmd)
    fuzz_cmd.set_defaults(fn=_cmd_fuzz)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    spectral_exit = EXIT_SPECTRUM if args.command == "represent" else EXIT_NUMERICAL
    try:
        return args.fn(args)
    except (ValueError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonexistentInverseError as exc:
        print(f"nonexistent: {exc.reason}", file=sys.stderr)
        return EXIT_NONEXISTENT
    except SpectrumError as exc:
        print(f"spectral precondition: {exc}", file=sys.stderr)
        return spectral_exit
    except (NumericalError, SingularMatrixError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
