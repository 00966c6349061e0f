"""Closed-form Jordan chain of the planar operator.

For gamma = -n c the spectral subspace is spanned by a single chain
``G_n, (gamma - A_2) G_n, ..., (gamma - A_2)^n G_n`` whose last element is
``(-1)^n H_n(y)``, where

    G_i(x) = sum_j 2^-j / (j! (i-2j)!) * (-rho / (2 c^2))^j * H_{i-2j}(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .hermite import HermitePoly, multiply_by_coordinate, to_json
from .ou_operator import OUContext, apply_shifted

__all__ = [
    "Chain2D",
    "MismatchWithClosedForm",
    "BadIndex",
    "g_poly",
    "verify_recursion",
    "closed_form_element",
    "build_chain_2d",
]


class BadIndex(ValueError):
    pass


class MismatchWithClosedForm(AssertionError):
    def __init__(self, k: int, message: str = ""):
        self.k = k
        super().__init__(message or f"iterated chain differs from the closed form at k={k}")


def _require_2d(ctx: OUContext) -> None:
    if ctx.d != 2:
        raise ValueError(f"planar construction needs d=2, got d={ctx.d}")


def _binom(k: int, j: int) -> int:
    return comb(k, j) if 0 <= j <= k else 0


def g_poly(i: int, ctx: OUContext) -> HermitePoly:
    """G_i(x) as a planar polynomial with no y-dependence."""
    _require_2d(ctx)
    if i < 0:
        raise BadIndex("G_i needs i >= 0")
    w = -ctx.rho / (2 * ctx.c**2)
    terms = {
        (i - 2 * j, 0): Fraction(1, 2**j * factorial(j) * factorial(i - 2 * j)) * w**j for j in range(i // 2 + 1)
    }
    return HermitePoly(2, ctx.rho, terms)


def _with_y(p: HermitePoly, j: int) -> HermitePoly:
    """p(x) * H_j(y) for p free of y."""
    return HermitePoly(2, p.rho, {(a, b + j): v for (a, b), v in p.terms.items()})


def verify_recursion(i: int, ctx: OUContext, g: HermitePoly | None = None) -> bool:
    """Check (-i c - A_2) G_i == -y G_{i-1} + rho/(2c) G_{i-2}.

    ``g`` replaces G_i on the left-hand side (negative controls).
    """
    _require_2d(ctx)
    if i < 2:
        raise BadIndex("the recursion starts at i = 2")
    at_i = ctx.at_level(i)
    lhs = apply_shifted(g_poly(i, ctx) if g is None else g, at_i)
    rhs = -multiply_by_coordinate(g_poly(i - 1, ctx), 1) + g_poly(i - 2, ctx) * (ctx.rho / (2 * ctx.c))
    return lhs == rhs


def closed_form_element(n: int, k: int, ctx: OUContext) -> HermitePoly:
    """(gamma - A_2)^k G_n from its explicit double sum."""
    _require_2d(ctx)
    if not 0 <= k <= n:
        raise BadIndex(f"k={k} outside 0..{n}")
    w = -ctx.rho / (2 * ctx.c)
    out = HermitePoly(2, ctx.rho)
    for i in range(max(0, n - 2 * k), n - k + 1):
        e = n - k - i
        coeff = w**e * _binom(k, e)
        if coeff:
            out = out + _with_y(g_poly(i, ctx), 2 * k - n + i) * coeff
    return out * (-1) ** k


@dataclass(frozen=True)
class Chain2D:
    n: int
    ctx: OUContext
    elements: tuple[HermitePoly, ...]
    closed_form: tuple[HermitePoly, ...]

    @property
    def lead(self) -> HermitePoly:
        return self.elements[0]

    @property
    def eigenfunction(self) -> HermitePoly:
        return self.elements[-1]

    def to_json(self) -> dict:
        return {
            "d": 2,
            "n": self.n,
            "c": str(self.ctx.c),
            "sigma2": str(self.ctx.sigma2),
            "rho": str(self.ctx.rho),
            "gamma": str(self.ctx.gamma),
            "length": len(self.elements),
            "lead": to_json(self.lead),
            "elements": [to_json(p) for p in self.elements],
            "closed_form_matches": self.elements == self.closed_form,
        }


def build_chain_2d(n: int, ctx: OUContext) -> Chain2D:
    """Iterate (gamma - A_2) from G_n and check every step against the closed form."""
    _require_2d(ctx)
    if ctx.n != n:
        ctx = ctx.at_level(n)
    elements = [g_poly(n, ctx)]
    for _ in range(n):
        elements.append(apply_shifted(elements[-1], ctx))
    closed = [closed_form_element(n, k, ctx) for k in range(n + 1)]
    for k, (a, b) in enumerate(zip(elements, closed)):
        if a != b:
            raise MismatchWithClosedForm(k)
    expected_tail = HermitePoly(2, ctx.rho, {(0, n): (-1) ** n})
    if elements[-1] != expected_tail:
        raise MismatchWithClosedForm(n, "last chain element is not (-1)^n H_n(y)")
    if apply_shifted(elements[-1], ctx):
        raise MismatchWithClosedForm(n + 1, "chain does not terminate after n+1 elements")
    return Chain2D(n, ctx, tuple(elements), tuple(closed))
