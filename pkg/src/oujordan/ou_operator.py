"""The Ornstein-Uhlenbeck generator with Jordan-block drift, on Hermite expansions.

For drift ``-c I + (shift)`` and diffusion ``sigma2 * Laplacian``,

    A_d = -c * sum_s N_s + sum_{s<d} x_{s+1} d/dx_s,    N = -rho d^2 + x d,

with ``rho = sigma2 / c``. Three Hermite identities do all the work:

    N H_i = i H_i,    d H_i = i H_{i-1},    x H_i = H_{i+1} + i rho H_{i-1}.

So a coupling term sends ``H_alpha`` to ``alpha_s`` times
``H_{alpha - e_s + e_{s+1}}`` (same degree) plus ``alpha_s alpha_{s+1} rho``
times ``H_{alpha - e_s - e_{s+1}}`` (degree minus two).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import DimensionMismatch, as_fraction
from .hermite import HermitePoly, MultiIndex, project

__all__ = [
    "OUContext",
    "apply_A",
    "apply_shifted",
    "apply_projected",
    "apply_projected_lower",
    "apply_power",
    "shifted_image_of_basis",
]


@dataclass(frozen=True)
class OUContext:
    """Parameters of one eigenvalue problem: gamma = -n c on R^d."""

    d: int
    n: int
    c: Fraction = Fraction(1)
    sigma2: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "sigma2", as_fraction(self.sigma2))
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.n < 0:
            raise ValueError("level n must be nonnegative")
        if self.c <= 0 or self.sigma2 <= 0:
            raise ValueError("c and sigma2 must be positive")

    @property
    def rho(self) -> Fraction:
        return self.sigma2 / self.c

    @property
    def gamma(self) -> Fraction:
        return -self.n * self.c

    @property
    def r(self) -> int:
        return self.n // 2

    def at_level(self, n: int) -> "OUContext":
        return OUContext(self.d, n, self.c, self.sigma2)

    def zero(self) -> HermitePoly:
        return HermitePoly(self.d, self.rho)

    def basis(self, idx, coeff=1) -> HermitePoly:
        return HermitePoly(self.d, self.rho, {tuple(idx): coeff})


def _check(p: HermitePoly, ctx: OUContext) -> None:
    if p.dim != ctx.d:
        raise DimensionMismatch(f"polynomial in {p.dim} variables, operator acts on {ctx.d}")
    if p.rho != ctx.rho:
        raise DimensionMismatch(f"polynomial has rho={p.rho}, context has rho={ctx.rho}")


def _coupling_image(idx: MultiIndex, rho: Fraction) -> list[tuple[MultiIndex, Fraction]]:
    """sum_s x_{s+1} d/dx_s applied to H_idx."""
    out = []
    for s in range(len(idx) - 1):
        a = idx[s]
        if not a:
            continue
        b = idx[s + 1]
        out.append((idx[:s] + (a - 1, b + 1) + idx[s + 2 :], Fraction(a)))
        if b:
            out.append((idx[:s] + (a - 1, b - 1) + idx[s + 2 :], a * b * rho))
    return out


def apply_A(p: HermitePoly, ctx: OUContext) -> HermitePoly:
    _check(p, ctx)
    acc: dict[MultiIndex, Fraction] = {}
    for idx, coeff in p.terms.items():
        acc[idx] = acc.get(idx, 0) - ctx.c * sum(idx) * coeff
        for key, w in _coupling_image(idx, ctx.rho):
            acc[key] = acc.get(key, 0) + w * coeff
    return HermitePoly(ctx.d, ctx.rho, acc)


def apply_shifted(p: HermitePoly, ctx: OUContext) -> HermitePoly:
    """(gamma - A_d) p."""
    _check(p, ctx)
    acc: dict[MultiIndex, Fraction] = {}
    for idx, coeff in p.terms.items():
        diag = (sum(idx) - ctx.n) * ctx.c
        if diag:
            acc[idx] = acc.get(idx, 0) + diag * coeff
        for key, w in _coupling_image(idx, ctx.rho):
            acc[key] = acc.get(key, 0) - w * coeff
    return HermitePoly(ctx.d, ctx.rho, acc)


def shifted_image_of_basis(idx: MultiIndex, ctx: OUContext) -> HermitePoly:
    return apply_shifted(ctx.basis(idx), ctx)


def apply_projected(p: HermitePoly, m: int, ctx: OUContext) -> HermitePoly:
    """Q_m (gamma - A_d) Q_m p: the degree-preserving part on grade m."""
    return project(apply_shifted(project(p, m), ctx), m)


def apply_projected_lower(p: HermitePoly, m: int, ctx: OUContext) -> HermitePoly:
    """Q_{m-2} (gamma - A_d) Q_m p: the degree-lowering part on grade m."""
    return project(apply_shifted(project(p, m), ctx), m - 2)


def apply_power(p: HermitePoly, ctx: OUContext, t: int) -> HermitePoly:
    """(gamma - A_d)^t p."""
    if t < 0:
        raise ValueError("negative power")
    _check(p, ctx)
    for _ in range(t):
        p = apply_shifted(p, ctx)
    return p
