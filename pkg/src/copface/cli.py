"""Command-line entry point ``copface``.

Exit codes: 0 success, 2 precondition failure, 3 numerically inconclusive,
4 I/O error.  Failures print a JSON error object on stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions, faces, pipelines, zeros
from .constructions import build_circulant, build_lift
from .faces import certify_exposed, face_dimension
from .graph import zero_graph
from .linalg import TolerancePolicy, read_matrix, write_matrix
from .zeros import enumerate_minimal_zeros

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3
EXIT_IO = 4

INCONCLUSIVE = (
    faces.InconclusiveError,
    faces.CertificateError,
    constructions.ConstructionError,
    zeros.CopositivityInconclusive,
)
PRECONDITION = (
    ValueError,
    IndexError,
    zeros.BudgetExceeded,
)


def _tolerances(args) -> TolerancePolicy:
    zero_tol = args.tol_zero
    if zero_tol is None:
        env = os.environ.get("COPFACE_TOL_ZERO")
        zero_tol = float(env) if env else TolerancePolicy.zero_tol
    rank_tol = args.tol_rank if args.tol_rank is not None else TolerancePolicy.rank_tol_rel
    return TolerancePolicy(zero_tol=zero_tol, rank_tol_rel=rank_tol)


def _parse_index_set(text: str) -> list[int]:
    try:
        idx = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"index set must look like '1,2,3', got {text!r}") from None
    if not idx or any(i < 1 for i in idx):
        raise ValueError(f"index set must hold positive 1-based indices, got {text!r}")
    return [i - 1 for i in idx]


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_hildebrand(args, tol):
    A, _ = build_circulant(args.n)
    write_matrix(A, args.out)
    _emit({"n": args.n, "out": str(args.out)})


def _catalog(path, tol):
    A = read_matrix(path, tol)
    return enumerate_minimal_zeros(A, tol)


def cmd_zeros(args, tol):
    _emit(_catalog(args.path, tol).to_json())


def cmd_graph(args, tol):
    _emit(zero_graph(_catalog(args.path, tol), tol).to_json())


def cmd_facedim(args, tol):
    catalog = _catalog(args.path, tol)
    cover = zero_graph(catalog, tol)
    exposed = False
    if len(catalog):
        exposed = bool(certify_exposed(catalog.matrix, catalog, cover, tol).exposed)
    _emit(face_dimension(catalog, cover, tol, maximal=exposed).to_json())


def cmd_certify(args, tol):
    catalog = _catalog(args.path, tol)
    _emit(certify_exposed(catalog.matrix, catalog, None, tol).to_json())


def cmd_lift(args, tol):
    catalog = _catalog(args.path, tol)
    lift = build_lift(catalog.matrix, catalog, _parse_index_set(args.index_set), tol)
    write_matrix(lift.lifted, args.out)
    _emit(lift.to_json())


def cmd_bounds(args, tol):
    orders = args.n or list(range(5, 12))
    index_set = _parse_index_set(args.index_set) if args.index_set else None
    reports = [pipelines.bounds_report(n, tol, index_set) for n in orders]
    if args.json:
        payload = [r.to_json() for r in reports]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(pipelines.format_bounds_table(reports))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copface",
        description="Copositive extreme rays, minimal zeros and faces of the completely positive cone.",
    )
    parser.add_argument("--tol-zero", type=float, default=None, help="absolute zero threshold (env COPFACE_TOL_ZERO)")
    parser.add_argument("--tol-rank", type=float, default=None, help="relative singular-value threshold")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hildebrand", help="write the odd-order circulant extremal matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hildebrand)

    for name, func, text in [
        ("zeros", cmd_zeros, "list normalized minimal zeros"),
        ("graph", cmd_graph, "minimal-zeros graph and its maximal cliques"),
        ("facedim", cmd_facedim, "dimension of the face CP(n) ∩ A^⊥"),
        ("certify", cmd_certify, "extreme/exposed certificate"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument("path")
        p.set_defaults(func=func)

    p = sub.add_parser("lift", help="lift a matrix to order n + 1 with index set I")
    p.add_argument("path")
    p.add_argument("--index-set", required=True, help="1-based, comma separated, e.g. 1,2,3")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("bounds", help="bounds on the smallest maximal-face dimension of CP(n)")
    p.add_argument("--n", type=int, nargs="+", help="orders in 5..12 (default 5..11)")
    p.add_argument("--index-set", default=None, help="override I for even n (1-based)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)
    return parser


def _fail(exc: BaseException, code: int) -> int:
    err = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    print(json.dumps(err), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerances(args)
        args.func(args, tol)
    except OSError as exc:
        return _fail(exc, EXIT_IO)
    except INCONCLUSIVE as exc:
        return _fail(exc, EXIT_INCONCLUSIVE)
    except PRECONDITION as exc:
        return _fail(exc, EXIT_PRECONDITION)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
