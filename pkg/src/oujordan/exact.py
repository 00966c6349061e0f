"""Exact rational matrices.

Scalars are :class:`fractions.Fraction`. Matrices are dense, immutable and
small (a few hundred rows at most). Rank and determinant use fraction-free
elimination on integer rows obtained by clearing denominators, so no
intermediate rational ever needs normalising.

All row and column selections are 0-based. A 1-based selection
``{i_1 < ... < i_s}`` translates to ``[i_1 - 1, ..., i_s - 1]``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "Fraction",
    "ExactMatrix",
    "ExactAlgebraError",
    "NonSquare",
    "BadSelection",
    "NonSquareSelection",
    "ZeroDiagonal",
    "DimensionMismatch",
    "SingularMatrix",
    "as_fraction",
    "rank",
    "determinant",
    "minor",
    "minors",
    "solve_lower_triangular",
    "solve",
    "kernel_dimension",
    "nullspace",
]


class ExactAlgebraError(ValueError):
    pass


class NonSquare(ExactAlgebraError):
    pass


class BadSelection(ExactAlgebraError):
    pass


class NonSquareSelection(ExactAlgebraError):
    pass


class ZeroDiagonal(ExactAlgebraError):
    pass


class DimensionMismatch(ExactAlgebraError):
    pass


class SingularMatrix(ExactAlgebraError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would smuggle rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class ExactMatrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(row) != width for row in rows):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != width:
                raise DimensionMismatch(f"expected {cols} columns, got {width}")
        else:
            width = cols or 0
        self.rows = len(rows)
        self.cols = width
        self._data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "ExactMatrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns), cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Row-major flat view."""
        return tuple(x for row in self._data for x in row)

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._data]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self._data), cols=self.rows) if self.rows else ExactMatrix.zeros(self.cols, 0)

    def submatrix(self, row_sel: Sequence[int], col_sel: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self._data[i][j] for j in col_sel] for i in row_sel], cols=len(col_sel))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._data)
        return f"ExactMatrix([{body}])"

    def __neg__(self):
        return ExactMatrix([[-x for x in row] for row in self._data], cols=self.cols)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return ExactMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, k) -> "ExactMatrix":
        k = as_fraction(k)
        return ExactMatrix([[k * x for x in row] for row in self._data], cols=self.cols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        zero = Fraction(0)
        # skip zeros on both sides; the operator matrices are very sparse
        other_rows = [[(j, x) for j, x in enumerate(row) if x] for row in other._data]
        out = []
        for row in self._data:
            acc = [zero] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in other_rows[k]:
                        acc[j] += a * b
            out.append(acc)
        return ExactMatrix(out, cols=other.cols)

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix has {self.cols} columns, vector has {len(v)} entries")
        v = [as_fraction(x) for x in v]
        return [sum((a * b for a, b in zip(row, v) if a), Fraction(0)) for row in self._data]

    def __pow__(self, t: int) -> "ExactMatrix":
        if not self.is_square:
            raise NonSquare("power of a non-square matrix")
        if t < 0:
            raise ValueError("negative power")
        out = ExactMatrix.identity(self.rows)
        for _ in range(t):
            out = self @ out
        return out


def _integer_rows(m: ExactMatrix) -> list[list[int]]:
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in m._data:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (scale // x.denominator) for x in row])
    return out


def _row_scales(m: ExactMatrix) -> list[int]:
    return [lcm(*(x.denominator for x in row)) if row else 1 for row in m._data]


def rank(m: ExactMatrix) -> int:
    """Exact rank over Q.

    Rows are cleared to integers and kept sparse; each elimination step is
    the fraction-free update ``p*row - a*pivot_row`` followed by removal of
    the row content, which keeps the integers small.
    """
    rows = []
    for row in _integer_rows(m):
        sparse = {j: x for j, x in enumerate(row) if x}
        if sparse:
            rows.append(sparse)
    r = 0
    for col in range(m.cols):
        pivot = None
        for idx in range(r, len(rows)):
            if col in rows[idx]:
                if pivot is None or len(rows[idx]) < len(rows[pivot]):
                    pivot = idx
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        p = prow[col]
        for idx in range(r + 1, len(rows)):
            row = rows[idx]
            a = row.get(col)
            if a is None:
                continue
            g = gcd(p, a)
            pm, am = p // g, a // g
            new = {j: pm * x for j, x in row.items()}
            for j, x in prow.items():
                v = new.get(j, 0) - am * x
                if v:
                    new[j] = v
                else:
                    new.pop(j, None)
            if new:
                content = gcd(*new.values())
                if content > 1:
                    new = {j: x // content for j, x in new.items()}
            rows[idx] = new
        rows = rows[: r + 1] + [row for row in rows[r + 1 :] if row]
        r += 1
        if r == len(rows):
            break
    return r


def determinant(m: ExactMatrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = _integer_rows(m)
    scale = 1
    for s in _row_scales(m):
        scale *= s
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def _check_selection(sel: Sequence[int], bound: int, what: str) -> None:
    for a, b in zip(sel, sel[1:]):
        if b <= a:
            raise BadSelection(f"{what} selection {list(sel)} is not strictly increasing")
    if sel and (sel[0] < 0 or sel[-1] >= bound):
        raise BadSelection(f"{what} selection {list(sel)} out of range 0..{bound - 1}")


def minor(m: ExactMatrix, row_sel: Sequence[int], col_sel: Sequence[int]) -> Fraction:
    """Determinant of ``m[row_sel, col_sel]`` (0-based, strictly increasing)."""
    row_sel, col_sel = list(row_sel), list(col_sel)
    _check_selection(row_sel, m.rows, "row")
    _check_selection(col_sel, m.cols, "column")
    if len(row_sel) != len(col_sel):
        raise NonSquareSelection(f"{len(row_sel)} rows vs {len(col_sel)} columns")
    return determinant(m.submatrix(row_sel, col_sel))


def minors(m: ExactMatrix, size: int):
    """Yield ``(rows, cols, value)`` for every ``size`` x ``size`` minor."""
    for rs in combinations(range(m.rows), size):
        for cs in combinations(range(m.cols), size):
            yield rs, cs, determinant(m.submatrix(rs, cs))


def solve_lower_triangular(L: ExactMatrix, b: Sequence) -> list[Fraction]:
    """Forward substitution for ``L x = b``."""
    if not L.is_square:
        raise NonSquare("triangular solve needs a square matrix")
    if len(b) != L.rows:
        raise DimensionMismatch(f"matrix has {L.rows} rows, right-hand side has {len(b)}")
    x: list[Fraction] = []
    for i in range(L.rows):
        d = L[i, i]
        if d == 0:
            raise ZeroDiagonal(f"zero diagonal entry at {i}")
        row = L.row(i)
        acc = as_fraction(b[i]) - sum((row[j] * x[j] for j in range(i) if row[j]), Fraction(0))
        x.append(acc / d)
    return x


def _rref(m: ExactMatrix) -> tuple[list[list[Fraction]], list[int]]:
    a = m.tolist()
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][col] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m.rows:
            break
    return a, pivots


def nullspace(m: ExactMatrix) -> list[list[Fraction]]:
    """A basis of the right kernel, one free variable set to 1 per vector."""
    a, pivots = _rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        basis.append(v)
    return basis


def solve(m: ExactMatrix, b: Sequence) -> list[Fraction]:
    """Unique solution of a nonsingular square system."""
    if not m.is_square:
        raise NonSquare("solve needs a square matrix")
    if len(b) != m.rows:
        raise DimensionMismatch(f"matrix has {m.rows} rows, right-hand side has {len(b)}")
    aug = ExactMatrix([list(row) + [b_i] for row, b_i in zip(m._data, b)], cols=m.cols + 1)
    a, pivots = _rref(aug)
    if pivots[: m.cols] != list(range(m.cols)) or len(pivots) > m.cols:
        raise SingularMatrix("system matrix is singular")
    return [a[i][m.cols] for i in range(m.cols)]


def kernel_dimension(m: ExactMatrix) -> int:
    return m.cols - rank(m)
