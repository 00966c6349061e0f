"""Brute-force Jordan structure of gamma from the matrix of (gamma - A_d) on P_n.

P_n (all tensor Hermite terms of total degree <= n) is invariant, and gamma
only appears on the grade-n diagonal block, so the kernel dimensions of the
powers of this matrix give the Segre characteristic of gamma directly. No
result from the constructive modules is used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .exact import ExactMatrix, kernel_dimension
from .hermite import HermitePoly, MultiIndex, basis_up_to
from .ou_operator import OUContext, apply_shifted

__all__ = [
    "OperatorMatrix",
    "JordanReport",
    "TheoryMismatch",
    "operator_matrix",
    "kernel_dimensions",
    "segre_from_kernel_dimensions",
    "jordan_structure",
    "expected_structure",
    "compare_with_theory",
]


class TheoryMismatch(AssertionError):
    def __init__(self, quantity: str, observed, expected):
        self.quantity = quantity
        self.observed = observed
        self.expected = expected
        super().__init__(f"{quantity}: oracle gives {observed}, theory predicts {expected}")


@dataclass(frozen=True)
class OperatorMatrix:
    ctx: OUContext
    basis: tuple[MultiIndex, ...]
    matrix: ExactMatrix

    def coordinates(self, p: HermitePoly) -> list:
        return p.vector(self.basis)


@dataclass(frozen=True)
class JordanReport:
    segre: tuple[int, ...]
    geometric: int
    algebraic: int
    index: int
    kernel_dims: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "segre": list(self.segre),
            "geometric": self.geometric,
            "algebraic": self.algebraic,
            "index": self.index,
            "kernel_dims": list(self.kernel_dims),
        }


def operator_matrix(ctx: OUContext) -> OperatorMatrix:
    basis = tuple(basis_up_to(ctx.d, ctx.n))
    cols = [apply_shifted(ctx.basis(v), ctx).vector(basis) for v in basis]
    return OperatorMatrix(ctx, basis, ExactMatrix.from_columns(cols))


def kernel_dimensions(m: ExactMatrix) -> list[int]:
    """[k_1, k_2, ...] with k_j = dim ker m^j, stopping once it stabilises.

    The last entry repeats its predecessor; the loop is capped at the size
    of the matrix plus one.
    """
    dims: list[int] = []
    power = m
    for _ in range(m.rows + 1):
        dims.append(kernel_dimension(power))
        if len(dims) >= 2 and dims[-1] == dims[-2]:
            break
        power = m @ power
    return dims


def segre_from_kernel_dimensions(dims: list[int]) -> list[int]:
    """Block sizes, largest first; blocks of size >= j number k_j - k_{j-1}."""
    ks = [0] + list(dims)
    at_least = [ks[j] - ks[j - 1] for j in range(1, len(ks))] + [0]
    segre = []
    for j in range(len(at_least) - 1, 0, -1):
        exactly = at_least[j - 1] - at_least[j]
        segre.extend([j] * exactly)
    return segre


def jordan_structure(ctx: OUContext, om: OperatorMatrix | None = None) -> JordanReport:
    om = om or operator_matrix(ctx)
    dims = kernel_dimensions(om.matrix)
    segre = segre_from_kernel_dimensions(dims)
    stable = len(dims) - 1 if len(dims) >= 2 and dims[-1] == dims[-2] else len(dims)
    return JordanReport(
        segre=tuple(segre),
        geometric=dims[0],
        algebraic=dims[-1],
        index=stable,
        kernel_dims=tuple(dims),
    )


def expected_structure(d: int, n: int) -> JordanReport:
    """Multiplicities and block sizes predicted for d = 2 and d = 3."""
    if d == 2:
        segre = (n + 1,)
    elif d == 3:
        segre = tuple(2 * n + 1 - 4 * k for k in range(n // 2 + 1))
    else:
        raise ValueError(f"no theoretical prediction for d={d}")
    return JordanReport(segre=segre, geometric=len(segre), algebraic=comb(n + d - 1, d - 1), index=1 + (d - 1) * n)


def compare_with_theory(ctx: OUContext, report: JordanReport | None = None) -> dict:
    """Hard comparison of the oracle against the predicted structure."""
    if ctx.d not in (2, 3):
        raise ValueError(f"theory comparison is only defined for d in (2, 3), got d={ctx.d}")
    report = report or jordan_structure(ctx)
    expected = expected_structure(ctx.d, ctx.n)
    for name in ("algebraic", "index", "segre", "geometric"):
        got, want = getattr(report, name), getattr(expected, name)
        if got != want:
            raise TheoryMismatch(name, got, want)
    if sum(report.segre) != report.algebraic:
        raise TheoryMismatch("sum of block sizes", sum(report.segre), report.algebraic)
    return {
        "d": ctx.d,
        "n": ctx.n,
        "oracle": report.to_json(),
        "theory": {k: v for k, v in expected.to_json().items() if k != "kernel_dims"},
        "agrees": True,
    }
