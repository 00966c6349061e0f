"""Command-line front end.

    oujordan d2 --n N           Jordan chain for d=2 (JSON)
    oujordan d3 --n N           Jordan basis for d=3 (JSON)
    oujordan oracle --d D --n N brute-force structure, plus theory check for d in {2,3}
    oujordan dag --n N          basis DAG (--format dot|json|text)
    oujordan conjecture --n N   S_k eigenvector experiment (JSON)
    oujordan verify --max-n N   invariant sweep; exit 1 on any failure

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .dag import build_dag, export_dot, remark_distance_report
from .jordan2d import MismatchWithClosedForm, build_chain_2d
from .jordan3d import conjecture_check, jordan_basis, minors_report
from .oracle import TheoryMismatch, compare_with_theory, jordan_structure
from .ou_operator import OUContext
from .verify import run_sweep

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    p, q = int(m.group(1)), int(m.group(2) or 1)
    if q == 0:
        raise argparse.ArgumentTypeError("denominator must be positive")
    return Fraction(p, q)


def natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oujordan", description="Jordan decomposition of OU operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_n=True):
        if need_n:
            p.add_argument("--n", type=natural, required=True, help="eigenvalue level, gamma = -n c")
        p.add_argument("--c", type=parse_rational, default=Fraction(1), help="drift rate (integer or p/q)")
        p.add_argument("--sigma2", type=parse_rational, default=Fraction(1), help="diffusion (integer or p/q)")
        p.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")

    common(sub.add_parser("d2", help="planar Jordan chain"))
    p = sub.add_parser("d3", help="three-dimensional Jordan basis")
    common(p)
    p = sub.add_parser("oracle", help="brute-force Jordan structure")
    common(p)
    p.add_argument("--d", type=natural, required=True, help="dimension (>= 2)")
    p = sub.add_parser("dag", help="basis DAG of grade n")
    common(p)
    p.add_argument("--format", choices=["dot", "json", "text"], default="dot")
    p = sub.add_parser("conjecture", help="S_k eigenvector experiment")
    common(p)
    p.add_argument("--minors", action="store_true", help="include the minors scan")
    p = sub.add_parser("verify", help="full invariant sweep")
    common(p, need_n=False)
    p.add_argument("--max-n", type=natural, default=6)
    p.add_argument("--log", default="-", help="log file, '-' for stdout")
    return parser


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _context(args, d: int) -> OUContext:
    if args.c <= 0 or args.sigma2 <= 0:
        raise UsageError("--c and --sigma2 must be positive")
    if d < 2:
        raise UsageError("--d must be at least 2")
    return OUContext(d, args.n, args.c, args.sigma2)


def _dag_text(n: int) -> str:
    dag = build_dag(n)
    lines = [f"basis DAG, n={n}: {len(dag.vertices)} vertices, {len(dag.edges)} edges"]
    for h, verts in sorted(dag.by_height().items()):
        lines.append(f"height {h}: " + " ".join("".join(map(str, v)) if n <= 9 else "_".join(map(str, v)) for v in verts))
    return "\n".join(lines) + "\n"


def _dag_json(n: int) -> dict:
    dag = build_dag(n)
    return {
        "n": n,
        "vertices": [list(v) for v in dag.vertices],
        "edges": [{"from": list(a), "to": list(b), "weight": w} for a, b, w in dag.edges],
        "remark_distances": remark_distance_report(n) if n >= 1 else [],
    }


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "d2":
            _emit(dumps(build_chain_2d(args.n, _context(args, 2)).to_json()), args.output)
        elif args.command == "d3":
            ctx = _context(args, 3)
            conj = []
            if args.n >= 1:
                conj = [{"k": e["k"], "holds": e["holds"], "lambda": e["lambda"]} for e in conjecture_check(args.n, False)]
            _emit(dumps(jordan_basis(args.n, ctx).to_json(conjecture=conj)), args.output)
        elif args.command == "oracle":
            ctx = _context(args, args.d)
            report = jordan_structure(ctx)
            out = {"d": ctx.d, "n": ctx.n, "c": str(ctx.c), "sigma2": str(ctx.sigma2), "oracle": report.to_json()}
            if ctx.d in (2, 3):
                out["theory"] = compare_with_theory(ctx, report)["theory"]
                out["agrees"] = True
            else:
                out["theory"] = None
                out["note"] = "no theoretical prediction for this dimension; exploration only"
            _emit(dumps(out), args.output)
        elif args.command == "dag":
            if args.format == "dot":
                text = export_dot(build_dag(args.n))
            elif args.format == "json":
                text = dumps(_dag_json(args.n))
            else:
                text = _dag_text(args.n)
            _emit(text, args.output)
        elif args.command == "conjecture":
            if args.n < 1:
                raise UsageError("conjecture needs --n >= 1")
            out = {"n": args.n, "cases": conjecture_check(args.n)}
            if args.minors:
                out["minors"] = minors_report(args.n)
            _emit(dumps(out), args.output)
        elif args.command == "verify":
            checks = run_sweep(args.max_n, args.c, args.sigma2)
            failed = [c for c in checks if not c.passed]
            log = "".join(c.log_line() + "\n" for c in checks)
            log += f"{len(checks) - len(failed)}/{len(checks)} checks passed\n"
            _emit(log, args.log)
            if args.output != "-":
                report = {
                    "max_n": args.max_n,
                    "c": str(args.c),
                    "sigma2": str(args.sigma2),
                    "checks": [c.to_json() for c in checks],
                    "passed": not failed,
                }
                _emit(dumps(report), args.output)
            if failed:
                for c in failed:
                    print(c.log_line(), file=sys.stderr)
                return 1
    except UsageError as exc:
        print(f"oujordan: error: {exc}", file=sys.stderr)
        return 2
    except (TheoryMismatch, MismatchWithClosedForm, AssertionError, ArithmeticError) as exc:
        print(f"oujordan: verification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
