"""Invariant sweep behind ``oujordan verify``.

Each case is an independent (kind, n) pair; cases can run in worker
processes, but results are always collected in submission order so logs
and reports are byte-identical between runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .dag import build_dag, symmetry_check
from .exact import ExactMatrix, determinant, kernel_dimension, rank
from .hermite import HermitePoly, degree_support, project
from .jordan2d import build_chain_2d, verify_recursion
from .jordan3d import (
    composed_map,
    conjecture_check,
    jordan_basis,
    kernel_basis_psi,
    minors_report,
    step_heights,
    step_matrix,
    transition_matrices,
)
from .oracle import compare_with_theory, jordan_structure, operator_matrix
from .ou_operator import OUContext, apply_projected

__all__ = ["Check", "STANDARD_PARAMETERS", "run_case", "sweep_cases", "run_sweep", "thread_cap"]

STANDARD_PARAMETERS = ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)), (Fraction(1), Fraction(3)))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False

    def log_line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        return f"{tag} {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "informational": self.informational}


def _guard(name: str, fn) -> Check:
    try:
        detail = fn()
    except (AssertionError, ArithmeticError, ValueError) as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    if detail is False:
        return Check(name, False, "check returned false")
    return Check(name, True, detail if isinstance(detail, str) else "")


def _param_tag(c: Fraction, s: Fraction) -> str:
    return f"c={c},sigma2={s}"


def _d2_checks(n: int, params) -> list[Check]:
    out = []
    for c, s in params:
        ctx = OUContext(2, n, c, s)
        tag = f"d=2 n={n} {_param_tag(c, s)}"
        out.append(_guard(f"{tag} closed-form chain", lambda: build_chain_2d(n, ctx) is not None))
        if n >= 2:
            out.append(_guard(f"{tag} G recursion", lambda: verify_recursion(n, ctx)))

        def structure():
            chain = build_chain_2d(n, ctx)
            om = operator_matrix(ctx)
            rep = jordan_structure(ctx, om)
            compare_with_theory(ctx, rep)
            vecs = ExactMatrix([om.coordinates(p) for p in chain.elements], cols=len(om.basis))
            if rank(vecs) != n + 1:
                return False
            eig = om.coordinates(chain.eigenfunction)
            return kernel_dimension(om.matrix) == 1 and all(x == 0 for x in om.matrix.matvec(eig))

        out.append(_guard(f"{tag} oracle structure", structure))
    return out


def _d3_checks(n: int, params) -> list[Check]:
    out = []
    for c, s in params:
        ctx = OUContext(3, n, c, s)
        tag = f"d=3 n={n} {_param_tag(c, s)}"
        box = {}

        def chains():
            box["jb"] = jordan_basis(n, ctx)
            return f"segre {box['jb'].segre}"

        out.append(_guard(f"{tag} Jordan chains", chains))
        if "jb" not in box:
            continue
        jb = box["jb"]

        def eigen_formula():
            for ch in jb.chains:
                if project(ch.eigenfunction, n) != kernel_basis_psi(n, ch.k, ctx):
                    return False
            return True

        out.append(_guard(f"{tag} eigenfunction leading part", eigen_formula))
        allowed = set(range(n, -1, -2))
        out.append(
            _guard(
                f"{tag} spectral grades",
                lambda: all(degree_support(p) <= allowed for ch in jb.chains for p in ch.elements),
            )
        )

        def oracle_agreement():
            om = operator_matrix(ctx)
            rep = jordan_structure(ctx, om)
            compare_with_theory(ctx, rep)
            for ch in jb.chains:
                for j, p in enumerate(ch.elements):
                    v = om.coordinates(p)
                    for _ in range(ch.q - j - 1):
                        v = om.matrix.matvec(v)
                    if not any(v):
                        return False
                    if any(om.matrix.matvec(v)):
                        return False
            return f"segre {list(rep.segre)}"

        out.append(_guard(f"{tag} oracle agreement", oracle_agreement))
    return out


def _transition_checks(n: int) -> list[Check]:
    if n < 1:
        return []
    tag = f"d=3 n={n}"
    ts = transition_matrices(n)

    def derivation():
        for k in range(n // 2 + 1):
            heights = step_heights(n, k)
            for name in "ABCD":
                m = getattr(ts, name).get(k)
                if m is not None and step_matrix(n, heights[name]) != -m:
                    raise AssertionError(f"{name}_{k} differs from the derived step")
            if composed_map(n, n // 2 - k) != ts.S[k]:
                raise AssertionError(f"S_{k} differs from the composed map")
        return True

    def minors():
        rep = minors_report(n)
        if rep["negative_minors"] or not rep["det_S_positive"]:
            return False
        return f"det S = {rep['det_S']}"

    checks = [
        _guard(f"{tag} step matrices", derivation),
        _guard(f"{tag} minors nonnegative", minors),
        _guard(f"{tag} S_k nonsingular", lambda: all(determinant(S) > 0 for S in ts.S)),
    ]
    for entry in conjecture_check(n, with_eigenstructure=False):
        checks.append(
            Check(
                f"{tag} conjecture k={entry['k']}",
                True,
                f"holds={entry['holds']} lambda={entry['lambda']} observed={entry['observed_eigenvalue']}",
                informational=True,
            )
        )
    return checks


def _dag_checks(n: int) -> list[Check]:
    tag = f"dag n={n}"
    dag = build_dag(n)
    ctx = OUContext(3, n)

    def weights():
        for v in dag.vertices:
            image = apply_projected(ctx.basis(v), n, ctx)
            expected = HermitePoly(3, ctx.rho, {b: w for b, w in dag.out_edges(v)})
            if image != expected:
                return False
        return True

    return [
        _guard(f"{tag} order", lambda: len(dag.vertices) == comb(n + 2, 2)),
        _guard(f"{tag} symmetry", lambda: symmetry_check(dag)),
        _guard(f"{tag} middle height", lambda: len(dag.by_height().get(n, [])) == n // 2 + 1),
        _guard(f"{tag} edge weights", weights),
    ]


def run_case(case: tuple) -> list[Check]:
    kind, n, params = case
    if kind == "d2":
        return _d2_checks(n, params)
    if kind == "d3":
        return _d3_checks(n, params)
    if kind == "transition":
        return _transition_checks(n)
    if kind == "dag":
        return _dag_checks(n)
    raise ValueError(f"unknown case {kind}")


def sweep_cases(max_n: int, c: Fraction = Fraction(1), sigma2: Fraction = Fraction(1)) -> list[tuple]:
    params = [(Fraction(c), Fraction(sigma2))]
    params += [p for p in STANDARD_PARAMETERS if p not in params]
    params = tuple(params)
    cases = []
    for n in range(max_n + 1):
        cases += [("d2", n, params), ("d3", n, params), ("transition", n, ()), ("dag", n, ())]
    return cases


def thread_cap() -> int:
    raw = os.environ.get("OUJORDAN_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(max_n: int, c=Fraction(1), sigma2=Fraction(1), workers: int | None = None) -> list[Check]:
    cases = sweep_cases(max_n, c, sigma2)
    workers = thread_cap() if workers is None else workers
    if workers <= 1:
        results = [run_case(case) for case in cases]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, cases))
    return [check for group in results for check in group]
