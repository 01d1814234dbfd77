"""Command line entry point."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Dict, Iterable, List, Optional, Sequence

from .curve_setup import (
    CurveError,
    InternalNonUnitPivotError,
    PrecisionAssumptionError,
)
from .frobenius_core import FrobeniusError, FrobeniusOptions, frobenius_matrix
from .matrix import RingMatrix
from .padic_ring import DivisibilityViolatedError, RingError
from .recurrence_engine import EngineError
from .reference_data import SESSION_MATRIX, SESSION_N, SESSION_P, SESSION_Q, ZETA_FIXTURES
from .zeta import (
    ZetaError,
    ZetaNumerator,
    charpoly_frobenius,
    point_count_naive,
    precision_for_exact_zeta,
    recover_zeta,
)

_LOGGER = logging.getLogger(__name__)

_THREADS_ENV = "FROBZETA_THREADS"
_DEFAULT_THREADS = 1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PRECISION = 3
EXIT_INTERNAL = 4


def _parse_coefficients(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers (c0,c1,...), got {text!r}"
        ) from exc


def _add_curve_arguments(parser: argparse.ArgumentParser, *, n_required: bool) -> None:
    parser.add_argument("--p", type=int, required=True, help="odd prime p")
    parser.add_argument(
        "--N",
        type=int,
        required=n_required,
        default=None,
        help="p-adic precision: results are modulo p^N",
    )
    parser.add_argument(
        "--Q",
        type=_parse_coefficients,
        required=True,
        help="coefficients of Q in ascending degree, e.g. 1,2,0,0,0,1",
    )
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker processes for the horizontal rows (fallback: ${_THREADS_ENV})",
    )
    parser.add_argument("--engine", choices=["bgs", "naive"], default="bgs")
    parser.add_argument(
        "--check-invariants",
        action="store_true",
        help="assert the intermediate divisibility and valuation invariants",
    )


def build_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobzeta",
        description="Frobenius matrices and zeta functions of hyperelliptic curves y^2 = Q(x).",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="log level (default: WARNING)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    frobenius = commands.add_parser("frobenius", help="print the Frobenius matrix modulo p^N")
    _add_curve_arguments(frobenius, n_required=True)

    zeta = commands.add_parser(
        "zeta", help="print the characteristic polynomial and the zeta numerator"
    )
    _add_curve_arguments(zeta, n_required=False)

    count = commands.add_parser("count", help="count points by brute force")
    count.add_argument("--p", type=int, required=True)
    count.add_argument("--k", type=int, default=1, choices=[1, 2])
    count.add_argument("--Q", type=_parse_coefficients, required=True)

    commands.add_parser("selftest", help="check against the embedded reference results")
    return parser


def resolve_thread_count(explicit: Optional[int]) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(_THREADS_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            _LOGGER.warning("ignoring %s=%r: not an integer", _THREADS_ENV, raw)
    return _DEFAULT_THREADS


def resolve_precision(explicit: Optional[int], p: int, q_coeffs: Sequence[int]) -> int:
    """``--N`` if given, otherwise the smallest ``N`` that pins the zeta function down."""

    if explicit is not None:
        return explicit
    g = max((len(q_coeffs) - 2) // 2, 1)
    N = precision_for_exact_zeta(p, g)
    _LOGGER.info("using N = %d (smallest exact precision for g = %d)", N, g)
    return N


def _options(args: argparse.Namespace) -> FrobeniusOptions:
    return FrobeniusOptions(
        threads=resolve_thread_count(args.threads),
        check_invariants=args.check_invariants,
        engine=args.engine,
    )


def format_matrix(matrix: RingMatrix) -> str:
    """Rows as ``[a b c]`` with right-aligned columns."""

    rows = matrix.to_rows()
    width = max((len(str(x)) for row in rows for x in row), default=1)
    return "\n".join("[" + " ".join(str(x).rjust(width) for x in row) + "]" for row in rows)


def _format_polynomial(descending: Sequence[int]) -> str:
    degree = len(descending) - 1
    terms = []
    for k, c in enumerate(descending):
        power = degree - k
        if c == 0:
            continue
        if power == 0:
            terms.append(str(c))
        elif power == 1:
            terms.append(f"{c}*T" if c != 1 else "T")
        else:
            terms.append(f"{c}*T^{power}" if c != 1 else f"T^{power}")
    return " + ".join(terms) if terms else "0"


def _matrix_payload(p: int, N: int, g: int, matrix: RingMatrix) -> Dict[str, object]:
    return {
        "p": p,
        "N": N,
        "g": g,
        "matrix": [[str(x) for x in row] for row in matrix.to_rows()],
    }


def _run_frobenius(args: argparse.Namespace) -> int:
    matrix = frobenius_matrix(args.p, args.N, args.Q, _options(args))
    g = matrix.rows // 2
    if args.format == "json":
        print(json.dumps(_matrix_payload(args.p, args.N, g, matrix), sort_keys=True))
    else:
        print(format_matrix(matrix))
    return EXIT_OK


def _run_zeta(args: argparse.Namespace) -> int:
    N = resolve_precision(args.N, args.p, args.Q)
    matrix = frobenius_matrix(args.p, N, args.Q, _options(args))
    g = matrix.rows // 2
    cp = charpoly_frobenius(matrix)
    zeta = recover_zeta(cp, args.p, g, N)
    if args.format == "json":
        payload = _matrix_payload(args.p, N, g, matrix)
        payload["charpoly"] = [str(c) for c in cp.descending()]
        payload["zeta"] = {
            "a": [str(a) for a in zeta.a],
            "exact": list(zeta.exact),
            "numerator": [str(c) for c in zeta.coefficients()] if zeta.complete else None,
            "jacobian_order": None if zeta.jacobian_order is None else str(zeta.jacobian_order),
        }
        print(json.dumps(payload, sort_keys=True))
        return EXIT_OK

    print(format_matrix(matrix))
    print(f"charpoly mod {args.p}^{N}: {_format_polynomial(cp.descending())}")
    for i, (a, exact) in enumerate(zip(zeta.a, zeta.exact), start=1):
        print(f"a_{i} = {a}" + ("" if exact else f"  (only known modulo {args.p}^{N})"))
    if zeta.complete:
        print(f"P(T) = {_format_polynomial(zeta.coefficients())}")
        print(f"#J = {zeta.jacobian_order}")
    return EXIT_OK


def _run_count(args: argparse.Namespace) -> int:
    print(point_count_naive(args.p, args.Q, args.k))
    return EXIT_OK


def run_selftest() -> bool:
    """Recompute the reference session and check the zeta fixtures."""

    ok = True
    matrix = frobenius_matrix(SESSION_P, SESSION_N, SESSION_Q)
    if tuple(tuple(row) for row in matrix.to_rows()) != SESSION_MATRIX:
        _LOGGER.error("reference session matrix mismatch:\n%s", format_matrix(matrix))
        ok = False
    else:
        _LOGGER.info("reference session matrix reproduced")

    for name, fixture in ZETA_FIXTURES.items():
        g = int(fixture["g"])
        zeta = ZetaNumerator(
            p=int(fixture["p"]),
            g=g,
            N=int(fixture["N"]),
            a=tuple(fixture["a"]),
            exact=(True,) * g,
        )
        if zeta.jacobian_order != fixture["jacobian_order"]:
            _LOGGER.error("%s: Jacobian order %s does not match", name, zeta.jacobian_order)
            ok = False
    return ok


def _run_selftest(args: argparse.Namespace) -> int:
    ok = run_selftest()
    print("selftest passed" if ok else "selftest FAILED")
    return EXIT_OK if ok else EXIT_INTERNAL


_COMMANDS = {
    "frobenius": _run_frobenius,
    "zeta": _run_zeta,
    "count": _run_count,
    "selftest": _run_selftest,
}


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, PrecisionAssumptionError):
        return EXIT_PRECISION
    if isinstance(
        exc,
        (DivisibilityViolatedError, InternalNonUnitPivotError, FrobeniusError, EngineError),
    ):
        return EXIT_INTERNAL
    return EXIT_INVALID


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_argument_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING),
        format="[%(levelname)s] %(message)s",
    )

    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    if getattr(args, "N", None) is not None and args.N < 1:
        parser.error("--N must be at least 1")

    try:
        return _COMMANDS[args.command](args)
    except (RingError, CurveError, EngineError, FrobeniusError, ZetaError, ValueError) as exc:
        code = exit_code_for(exc)
        print(f"frobzeta: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    sys.exit(main())
