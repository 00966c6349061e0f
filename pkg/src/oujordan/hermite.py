"""Tensor Hermite polynomials with exact coefficients.

``H_n`` is the Hermite polynomial of variance ``rho``:

    H_0 = 1,  H_1 = x,  H_{n+1} = x H_n - n rho H_{n-1}.

A :class:`HermitePoly` is a sparse linear combination of tensor products
``H_{i_1}(x_1) ... H_{i_d}(x_d)``, keyed by the multi-index ``(i_1, ..., i_d)``.

Canonical term order is by total degree (ascending), then decreasing
lexicographic order within a degree. Within one degree that order is a
topological order for the coupling moves ``e_s -> e_{s+1}`` of the operator,
which is what makes the projected systems lower triangular.
"""

from __future__ import annotations

import json
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .exact import DimensionMismatch, Fraction, as_fraction

__all__ = [
    "MultiIndex",
    "HermitePoly",
    "canonical_key",
    "basis_of_grade",
    "basis_up_to",
    "double_factorial",
    "hermite_1d",
    "monomial_to_hermite",
    "hermite_to_monomial",
    "project",
    "evaluate",
    "degree_support",
    "multiply_by_coordinate",
    "to_json",
    "from_json",
]

MultiIndex = tuple[int, ...]


def canonical_key(idx: Sequence[int]):
    return (sum(idx), tuple(-i for i in idx))


def basis_of_grade(d: int, m: int) -> list[MultiIndex]:
    """All d-tuples of total degree m, in decreasing lexicographic order."""
    if m < 0:
        return []
    if d == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in basis_of_grade(d - 1, m - first):
            out.append((first,) + rest)
    return out


def basis_up_to(d: int, n: int) -> list[MultiIndex]:
    """Canonical basis of all multi-indices with total degree <= n."""
    return [idx for m in range(n + 1) for idx in basis_of_grade(d, m)]


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError("double factorial undefined below -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _hermite_1d(n: int, rho: Fraction) -> tuple[Fraction, ...]:
    if n == 0:
        return (Fraction(1),)
    if n == 1:
        return (Fraction(0), Fraction(1))
    prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
    for m in range(1, n):
        nxt = [Fraction(0)] + cur
        for i, a in enumerate(prev):
            nxt[i] -= m * rho * a
        prev, cur = cur, nxt
    return tuple(cur)


def hermite_1d(n: int, rho) -> list[Fraction]:
    """Monomial coefficients of H_n, lowest power first."""
    if n < 0:
        raise ValueError("Hermite degree must be nonnegative")
    return list(_hermite_1d(n, as_fraction(rho)))


class HermitePoly:
    """Sparse tensor-Hermite expansion in ``dim`` variables with variance ``rho``.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("dim", "rho", "_terms")

    def __init__(self, dim: int, rho, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = dim
        self.rho = as_fraction(rho)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MultiIndex, Fraction] = {}
        for idx, coeff in items:
            idx = tuple(int(i) for i in idx)
            if len(idx) != dim:
                raise DimensionMismatch(f"index {idx} does not have length {dim}")
            if any(i < 0 for i in idx):
                raise ValueError(f"negative index {idx}")
            acc[idx] = acc.get(idx, Fraction(0)) + as_fraction(coeff)
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def zero(cls, dim: int, rho) -> "HermitePoly":
        return cls(dim, rho)

    @classmethod
    def basis(cls, idx: Sequence[int], rho, coeff=1) -> "HermitePoly":
        return cls(len(idx), rho, {tuple(idx): coeff})

    @property
    def terms(self) -> dict[MultiIndex, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: canonical_key(kv[0]))

    def coeff(self, idx: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(idx), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(k) for k in self._terms), default=-1)

    def _check(self, other: "HermitePoly") -> None:
        if self.dim != other.dim or self.rho != other.rho:
            raise DimensionMismatch(
                f"incompatible polynomials (d={self.dim}, rho={self.rho}) vs (d={other.dim}, rho={other.rho})"
            )

    def __eq__(self, other):
        if not isinstance(other, HermitePoly):
            return NotImplemented
        return self.dim == other.dim and self.rho == other.rho and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, self.rho, frozenset(self._terms.items())))

    def __add__(self, other: "HermitePoly") -> "HermitePoly":
        self._check(other)
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0) + v
        return HermitePoly(self.dim, self.rho, acc)

    def __neg__(self) -> "HermitePoly":
        return HermitePoly(self.dim, self.rho, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "HermitePoly") -> "HermitePoly":
        return self + (-other)

    def __mul__(self, scalar) -> "HermitePoly":
        s = as_fraction(scalar)
        return HermitePoly(self.dim, self.rho, {k: s * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        if not self._terms:
            return f"HermitePoly(d={self.dim}, rho={self.rho}, 0)"
        body = " + ".join(f"{c}*H{list(k)}" for k, c in self.items())
        return f"HermitePoly(d={self.dim}, rho={self.rho}, {body})"

    def vector(self, basis: Sequence[MultiIndex]) -> list[Fraction]:
        """Coordinates against ``basis``; raises if support falls outside it."""
        pos = {idx: i for i, idx in enumerate(basis)}
        out = [Fraction(0)] * len(basis)
        for k, v in self._terms.items():
            if k not in pos:
                raise ValueError(f"term {k} is outside the given basis")
            out[pos[k]] = v
        return out

    @classmethod
    def from_vector(cls, basis: Sequence[MultiIndex], values: Sequence, rho) -> "HermitePoly":
        d = len(basis[0]) if basis else 1
        return cls(d, rho, zip(basis, values))


def monomial_to_hermite(n: int, rho) -> HermitePoly:
    """Expansion of x**n: sum_k C(n,2k) (2k-1)!! rho^k H_{n-2k}."""
    rho = as_fraction(rho)
    return HermitePoly(
        1, rho, {(n - 2 * k,): comb(n, 2 * k) * double_factorial(2 * k - 1) * rho**k for k in range(n // 2 + 1)}
    )


def hermite_to_monomial(p: HermitePoly) -> dict[MultiIndex, Fraction]:
    """Expand into monomials ``x^a`` keyed by exponent tuple."""
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in p._terms.items():
        partial = {(): c}
        for n in idx:
            h = _hermite_1d(n, p.rho)
            nxt = {}
            for exps, v in partial.items():
                for e, a in enumerate(h):
                    if a:
                        key = exps + (e,)
                        nxt[key] = nxt.get(key, 0) + v * a
            partial = nxt
        for k, v in partial.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def project(p: HermitePoly, m: int) -> HermitePoly:
    """Part of ``p`` supported on total degree exactly ``m``."""
    return HermitePoly(p.dim, p.rho, {k: v for k, v in p._terms.items() if sum(k) == m})


def degree_support(p: HermitePoly) -> set[int]:
    return {sum(k) for k in p._terms}


def evaluate(p: HermitePoly, point: Sequence) -> Fraction:
    if len(point) != p.dim:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {p.dim} variables")
    point = [as_fraction(x) for x in point]
    cache: dict[tuple[int, int], Fraction] = {}

    def h(n, s):
        if (n, s) not in cache:
            x = point[s]
            cache[(n, s)] = sum((a * x**e for e, a in enumerate(_hermite_1d(n, p.rho)) if a), Fraction(0))
        return cache[(n, s)]

    total = Fraction(0)
    for idx, c in p._terms.items():
        term = c
        for s, n in enumerate(idx):
            term *= h(n, s)
        total += term
    return total


def multiply_by_coordinate(p: HermitePoly, s: int) -> HermitePoly:
    """x_s * p using x H_j = H_{j+1} + j rho H_{j-1} (s is 0-based)."""
    acc: dict[MultiIndex, Fraction] = {}
    for idx, c in p._terms.items():
        j = idx[s]
        up = idx[:s] + (j + 1,) + idx[s + 1 :]
        acc[up] = acc.get(up, 0) + c
        if j:
            down = idx[:s] + (j - 1,) + idx[s + 1 :]
            acc[down] = acc.get(down, 0) + j * p.rho * c
    return HermitePoly(p.dim, p.rho, acc)


def to_json(p: HermitePoly) -> dict:
    return {
        "d": p.dim,
        "rho": str(p.rho),
        "terms": [{"idx": list(k), "coeff": str(v)} for k, v in p.items()],
    }


def from_json(obj: Mapping | str) -> HermitePoly:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return HermitePoly(
        int(obj["d"]), Fraction(obj["rho"]), [(tuple(t["idx"]), Fraction(t["coeff"])) for t in obj["terms"]]
    )
