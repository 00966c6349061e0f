"""Jordan decomposition of A_3 at gamma = -n c.

Grade-n basis elements ``H_i(x) H_j(y) H_k(z)`` form a graded DAG under
``Q_n (gamma - A_3)`` with height ``j + 2k``. The construction:

1. ``psi_k`` spans the kernel of the grade-n part; each lifts to an
   eigenfunction ``h_k`` by solving a triangular cascade on lower grades.
2. A lead vector ``f_k`` has its grade-n part at height ``2k`` and is
   carried to ``psi_k`` at height ``2(n-k)`` in ``q_k - 1 = 2n - 4k`` steps.
   That composed map is the transition matrix ``S_{r-k}``.
3. The lower grades of ``f_k`` absorb the remaining residual.

All indices are 0-based; ``r = n // 2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .exact import (
    ExactMatrix,
    SingularMatrix,
    determinant,
    kernel_dimension,
    nullspace,
    rank,
    solve,
    solve_lower_triangular,
)
from .hermite import HermitePoly, MultiIndex, basis_of_grade, basis_up_to, degree_support, project, to_json
from .ou_operator import OUContext, apply_power, apply_projected, apply_shifted

__all__ = [
    "BadIndex",
    "GradeEqualsLevel",
    "NotHomogeneous",
    "ObstructedRHS",
    "VerificationFailed",
    "EigenCheckFailed",
    "SingularSystem",
    "ChainCheckFailed",
    "RankDeficient",
    "SumMismatch",
    "KernelElement",
    "JordanChain3D",
    "JordanBasis3D",
    "TransitionMatrixSet",
    "segre_3d",
    "height",
    "vertices_at_height",
    "kernel_basis_psi",
    "kernel_system",
    "m_matrix_pattern",
    "solve_projected",
    "solve_inhomogeneous",
    "eigenfunction",
    "lead_vector",
    "jordan_basis",
    "step_matrix",
    "transition_matrices",
    "step_heights",
    "composed_map",
    "minors_report",
    "conjecture_vector",
    "conjecture_lambda",
    "conjecture_check",
    "eigenstructure",
]


class BadIndex(ValueError):
    pass


class GradeEqualsLevel(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class ObstructedRHS(ValueError):
    pass


class VerificationFailed(AssertionError):
    pass


class EigenCheckFailed(AssertionError):
    pass


class SingularSystem(ArithmeticError):
    pass


class ChainCheckFailed(AssertionError):
    pass


class RankDeficient(AssertionError):
    pass


class SumMismatch(AssertionError):
    pass


def _default_ctx(n: int, ctx: OUContext | None) -> OUContext:
    if ctx is None:
        return OUContext(3, n)
    if ctx.d != 3:
        raise ValueError(f"this construction is for d=3, got d={ctx.d}")
    return ctx if ctx.n == n else ctx.at_level(n)


def _check_k(n: int, k: int) -> None:
    if not 0 <= k <= n // 2:
        raise BadIndex(f"k={k} outside 0..{n // 2}")


def segre_3d(n: int) -> list[int]:
    return [2 * n + 1 - 4 * k for k in range(n // 2 + 1)]


def height(idx: MultiIndex) -> int:
    return idx[1] + 2 * idx[2]


@lru_cache(maxsize=None)
def vertices_at_height(n: int, h: int) -> tuple[MultiIndex, ...]:
    """Grade-n triples of the given height, decreasing lexicographic."""
    return tuple(v for v in basis_of_grade(3, n) if height(v) == h)


# -- kernel of the grade-n part ------------------------------------------------


def kernel_basis_psi(n: int, k: int, ctx: OUContext | None = None) -> HermitePoly:
    """psi_k = sum_i (-2)^(k-i) C(k,i) H_{k-i}(x) H_{2i}(y) H_{n-k-i}(z).

    The coefficients are re-derived as the one-dimensional kernel of the
    projected operator on that span; a mismatch raises.
    """
    _check_k(n, k)
    ctx = _default_ctx(n, ctx)
    psi = HermitePoly(
        3, ctx.rho, {(k - i, 2 * i, n - k - i): (-2) ** (k - i) * comb(k, i) for i in range(k + 1)}
    )
    system = kernel_system(n, k, ctx)
    if system != m_matrix_pattern(k):
        raise EigenCheckFailed(f"derived kernel system for n={n}, k={k} differs from M_k")
    basis = nullspace(system)
    if len(basis) != 1:
        raise EigenCheckFailed(f"kernel system for n={n}, k={k} has dimension {len(basis)}")
    v = basis[0]
    # normalise so the i = k coefficient is 1
    v = [x / v[-1] for x in v]
    if v != [Fraction((-2) ** (k - i) * comb(k, i)) for i in range(k + 1)]:
        raise EigenCheckFailed(f"kernel vector for n={n}, k={k} does not match psi_k")
    return psi


def kernel_system(n: int, k: int, ctx: OUContext | None = None) -> ExactMatrix:
    """Matrix of Q_n(gamma - A_3) from span{H_{k-i} H_{2i} H_{n-k-i}} to its image span."""
    ctx = _default_ctx(n, ctx)
    src = [(k - i, 2 * i, n - k - i) for i in range(k + 1)]
    tgt = [(k - i - 1, 2 * i + 1, n - k - i) for i in range(k)]
    cols = [apply_projected(ctx.basis(v), n, ctx).vector(tgt) for v in src]
    return ExactMatrix.from_columns(cols) if k else ExactMatrix.zeros(0, 1)


def m_matrix_pattern(k: int) -> ExactMatrix:
    """M_k: k x (k+1), diagonal k, k-1, ..., 1 and superdiagonal 2, 4, ..., 2k (then negated)."""
    if k == 0:
        return ExactMatrix.zeros(0, 1)
    rows = []
    for i in range(k):
        row = [0] * (k + 1)
        row[i] = k - i
        row[i + 1] = 2 * (i + 1)
        rows.append(row)
    return -ExactMatrix(rows)


# -- triangular solvers ---------------------------------------------------------


@lru_cache(maxsize=None)
def _projected_matrix(ctx: OUContext, m: int) -> tuple[tuple[MultiIndex, ...], ExactMatrix]:
    basis = tuple(basis_of_grade(ctx.d, m))
    cols = [apply_projected(ctx.basis(v), m, ctx).vector(basis) for v in basis]
    return basis, ExactMatrix.from_columns(cols)


def solve_projected(g: HermitePoly, m: int, ctx: OUContext) -> HermitePoly:
    """Unique grade-m f with Q_m(gamma - A)f == g, for m != n.

    In decreasing lexicographic order the system is lower triangular with
    constant diagonal (m - n) c.
    """
    if m == ctx.n:
        raise GradeEqualsLevel(f"grade {m} equals the level; the projected operator is nilpotent there")
    if degree_support(g) - {m}:
        raise NotHomogeneous(f"right-hand side has grades {sorted(degree_support(g))}, expected only {m}")
    if not g:
        return ctx.zero()
    basis, L = _projected_matrix(ctx, m)
    x = solve_lower_triangular(L, g.vector(basis))
    return HermitePoly.from_vector(basis, x, ctx.rho)


def solve_inhomogeneous(g: HermitePoly, ctx: OUContext, verify: bool = True) -> HermitePoly:
    """Degree-matched solution of (gamma - A)f == g.

    Grades are solved from the top down: grade m of f must cancel grade m
    of g minus the spill ``Q_m (gamma - A) f_{m+2}`` from two grades up.
    """
    support = degree_support(g)
    bad = sorted(m for m in support if m >= ctx.n and (m - ctx.n) % 2 == 0)
    if bad:
        raise ObstructedRHS(f"right-hand side has components in grades {bad} (level n={ctx.n})")
    if not g:
        return ctx.zero()
    top = max(support)
    parts: dict[int, HermitePoly] = {}
    for m in range(top, -1, -1):
        rhs = project(g, m)
        above = parts.get(m + 2)
        if above is not None and above:
            rhs = rhs - project(apply_shifted(above, ctx), m)
        if not rhs:
            parts[m] = ctx.zero()
            continue
        if m == ctx.n:
            raise ObstructedRHS(f"cascade reaches the level grade {m} with a nonzero right-hand side")
        parts[m] = solve_projected(rhs, m, ctx)
    f = ctx.zero()
    for p in parts.values():
        f = f + p
    if verify and apply_shifted(f, ctx) != g:
        raise VerificationFailed("(gamma - A) f != g after solving")
    return f


# -- eigenfunctions and chains ------------------------------------------------------


@dataclass(frozen=True)
class KernelElement:
    n: int
    k: int
    psi: HermitePoly
    h: HermitePoly


def eigenfunction(n: int, k: int, ctx: OUContext | None = None) -> KernelElement:
    ctx = _default_ctx(n, ctx)
    psi = kernel_basis_psi(n, k, ctx)
    spill = apply_shifted(psi, ctx)
    if project(spill, n):
        raise EigenCheckFailed(f"psi_{k} is not in the kernel of the grade-{n} part")
    phi = solve_inhomogeneous(-spill, ctx)
    h = psi + phi
    if apply_shifted(h, ctx):
        raise EigenCheckFailed(f"h_{k} is not an eigenfunction at n={n}")
    return KernelElement(n, k, psi, h)


@dataclass(frozen=True)
class JordanChain3D:
    n: int
    k: int
    q: int
    lead: HermitePoly
    elements: tuple[HermitePoly, ...]
    transition: ExactMatrix = field(compare=False)

    @property
    def eigenfunction(self) -> HermitePoly:
        return self.elements[-1]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "q": self.q,
            "lead": to_json(self.lead),
            "elements": [to_json(p) for p in self.elements],
        }


def composed_map(n: int, k: int, ctx: OUContext | None = None) -> ExactMatrix:
    """Matrix of (Q_n(gamma - A_3))^(2n-4k) from height 2k to height 2(n-k)."""
    ctx = _default_ctx(n, ctx)
    src, tgt = vertices_at_height(n, 2 * k), vertices_at_height(n, 2 * (n - k))
    cols = []
    for v in src:
        p = ctx.basis(v)
        for _ in range(2 * n - 4 * k):
            p = apply_projected(p, n, ctx)
        cols.append(p.vector(tgt))
    return ExactMatrix.from_columns(cols)


def lead_vector(n: int, k: int, ctx: OUContext | None = None) -> JordanChain3D:
    ctx = _default_ctx(n, ctx)
    _check_k(n, k)
    q = 2 * n + 1 - 4 * k
    kern = eigenfunction(n, k, ctx)
    src, tgt = vertices_at_height(n, 2 * k), vertices_at_height(n, 2 * (n - k))
    S = composed_map(n, k, ctx)
    try:
        a = solve(S, kern.psi.vector(tgt))
    except SingularMatrix as exc:
        raise SingularSystem(f"transition system for n={n}, k={k} is singular") from exc
    phi = HermitePoly.from_vector(src, a, ctx.rho)
    residual = kern.h - apply_power(phi, ctx, q - 1)
    if project(residual, n):
        raise ChainCheckFailed(f"grade-{n} residual survives for k={k}")
    g = residual
    for _ in range(q - 1):
        g = solve_inhomogeneous(g, ctx)
    f = phi + g
    elements = [f]
    for _ in range(q - 1):
        elements.append(apply_shifted(elements[-1], ctx))
    if elements[-1] != kern.h:
        raise ChainCheckFailed(f"(gamma - A)^(q-1) f != h for n={n}, k={k}")
    if apply_shifted(elements[-1], ctx):
        raise ChainCheckFailed(f"chain for n={n}, k={k} does not terminate")
    return JordanChain3D(n, k, q, f, tuple(elements), S)


@dataclass(frozen=True)
class JordanBasis3D:
    n: int
    ctx: OUContext
    chains: tuple[JordanChain3D, ...]

    @property
    def segre(self) -> list[int]:
        return [ch.q for ch in self.chains]

    @property
    def algebraic_multiplicity(self) -> int:
        return sum(self.segre)

    @property
    def geometric_multiplicity(self) -> int:
        return len(self.chains)

    @property
    def index(self) -> int:
        return max(self.segre)

    def to_json(self, conjecture: list[dict] | None = None) -> dict:
        out = {
            "n": self.n,
            "c": str(self.ctx.c),
            "sigma2": str(self.ctx.sigma2),
            "rho": str(self.ctx.rho),
            "segre": self.segre,
            "geometric_multiplicity": self.geometric_multiplicity,
            "algebraic_multiplicity": self.algebraic_multiplicity,
            "chains": [ch.to_json() for ch in self.chains],
        }
        if conjecture is not None:
            out["conjecture"] = conjecture
        return out


def jordan_basis(n: int, ctx: OUContext | None = None) -> JordanBasis3D:
    ctx = _default_ctx(n, ctx)
    chains = tuple(lead_vector(n, k, ctx) for k in range(n // 2 + 1))
    total = sum(ch.q for ch in chains)
    if total != comb(n + 2, 2):
        raise SumMismatch(f"sum of block sizes {total} != C({n + 2},2)")
    basis = basis_up_to(3, n)
    vectors = [p.vector(basis) for ch in chains for p in ch.elements]
    got = rank(ExactMatrix(vectors, cols=len(basis)))
    if got != total:
        raise RankDeficient(f"chain elements have rank {got}, expected {total}")
    eig = rank(ExactMatrix([ch.eigenfunction.vector(basis) for ch in chains], cols=len(basis)))
    if eig != len(chains):
        raise RankDeficient(f"eigenfunctions have rank {eig}, expected {len(chains)}")
    return JordanBasis3D(n, ctx, chains)


# -- transition matrices --------------------------------------------------------


def step_matrix(n: int, h: int) -> ExactMatrix:
    """Q_n(gamma - A_3) from height h to h+1, in decreasing-lex bases.

    The grade-n part does not depend on c or sigma2.
    """
    ctx = OUContext(3, n)
    src, tgt = vertices_at_height(n, h), vertices_at_height(n, h + 1)
    cols = [apply_projected(ctx.basis(v), n, ctx).vector(tgt) for v in src]
    return ExactMatrix.from_columns(cols)


def step_heights(n: int, k: int) -> dict[str, int]:
    """Source height of each step matrix named in the S_k recursion."""
    if n % 2:
        return {"A": n - 1 - 2 * k, "B": n - 2 * k, "C": n - 1 + 2 * k, "D": n + 2 * k}
    return {"A": n - 2 * k, "B": n - 2 * k + 1, "C": n + 2 * k - 2, "D": n + 2 * k - 1}


def _upper_bidiagonal(size_r: int, size_c: int, diag, sup) -> ExactMatrix:
    rows = [[0] * size_c for _ in range(size_r)]
    for i in range(size_r):
        if i < size_c:
            rows[i][i] = diag(i)
        if i + 1 < size_c:
            rows[i][i + 1] = sup(i)
    return ExactMatrix(rows, cols=size_c)


def _lower_bidiagonal(size_r: int, size_c: int, diag, sub) -> ExactMatrix:
    rows = [[0] * size_c for _ in range(size_r)]
    for i in range(size_r):
        if i < size_c:
            rows[i][i] = diag(i)
        if 0 < i <= size_c:
            rows[i][i - 1] = sub(i)
    return ExactMatrix(rows, cols=size_c)


def _pattern_matrices(n: int, k: int) -> dict[str, ExactMatrix]:
    r = n // 2
    s = r + 1 - k
    odd = n % 2
    e = 1 if odd else 0
    out = {
        "A": _upper_bidiagonal(s, s, lambda i: r + k + e - i, lambda i: 2 * (i + 1)),
        "D": _lower_bidiagonal(s, s, lambda i: 2 * i + 1, lambda i: r - k - i + 1),
    }
    if k >= 1:
        out["B"] = _lower_bidiagonal(s + 1, s, lambda i: 2 * i + 1, lambda i: r + k + e - i)
        out["C"] = _upper_bidiagonal(s, s + 1, lambda i: r - k + 1 - i, lambda i: 2 * (i + 1))
    return out


@dataclass(frozen=True)
class TransitionMatrixSet:
    n: int
    parity: str
    A: dict[int, ExactMatrix]
    B: dict[int, ExactMatrix]
    C: dict[int, ExactMatrix]
    D: dict[int, ExactMatrix]
    S: tuple[ExactMatrix, ...]

    @property
    def r(self) -> int:
        return self.n // 2

    def named(self) -> list[tuple[str, ExactMatrix]]:
        out = []
        for k in range(self.r + 1):
            for name in "ABCD":
                m = getattr(self, name).get(k)
                if m is not None:
                    out.append((f"{name}_{k}", m))
            out.append((f"S_{k}", self.S[k]))
        return out


def transition_matrices(n: int) -> TransitionMatrixSet:
    """Bidiagonal step matrices and the products S_k.

    Odd n:  S_0 = D_0 A_0.   Even n: S_0 = Id.
    Both:   S_k = D_k C_k S_{k-1} B_k A_k.
    """
    if n < 1:
        raise ValueError("transition matrices need n >= 1")
    r = n // 2
    odd = bool(n % 2)
    A, B, C, D = {}, {}, {}, {}
    for k in range(0 if odd else 1, r + 1):
        pat = _pattern_matrices(n, k)
        A[k], D[k] = pat["A"], pat["D"]
        if k >= 1:
            B[k], C[k] = pat["B"], pat["C"]
    S = [D[0] @ A[0] if odd else ExactMatrix.identity(r + 1)]
    for k in range(1, r + 1):
        S.append(D[k] @ C[k] @ S[k - 1] @ B[k] @ A[k])
    return TransitionMatrixSet(n, "odd" if odd else "even", A, B, C, D, tuple(S))


def _all_minors(m: ExactMatrix, max_size: int):
    for s in range(1, min(m.rows, m.cols, max_size) + 1):
        for rs in combinations(range(m.rows), s):
            for cs in combinations(range(m.cols), s):
                yield rs, cs


def _sampled_minors(m: ExactMatrix, max_size: int, samples: int, rng: random.Random):
    top = min(m.rows, m.cols, max_size)
    for _ in range(samples):
        s = rng.randint(1, top)
        yield tuple(sorted(rng.sample(range(m.rows), s))), tuple(sorted(rng.sample(range(m.cols), s)))


def minors_report(n: int, max_size: int | None = None, samples: int = 500, seed: int = 0) -> dict:
    """Scan minors of every step matrix and S_k for negative values.

    Exhaustive when a matrix has both dimensions <= 6, else ``samples``
    random minors drawn with a fixed seed.
    """
    ts = transition_matrices(n)
    rng = random.Random(seed)
    matrices = []
    negatives = []
    for name, m in ts.named():
        size = min(m.rows, m.cols) if max_size is None else max_size
        exhaustive = max(m.rows, m.cols) <= 6
        selections = _all_minors(m, size) if exhaustive else _sampled_minors(m, size, samples, rng)
        checked = 0
        for rs, cs in selections:
            value = determinant(m.submatrix(rs, cs))
            checked += 1
            if value < 0:
                negatives.append({"matrix": name, "rows": list(rs), "cols": list(cs), "value": str(value)})
        matrices.append(
            {"matrix": name, "shape": [m.rows, m.cols], "minors_checked": checked, "exhaustive": exhaustive}
        )
    dets = [determinant(S) for S in ts.S]
    return {
        "n": n,
        "parity": ts.parity,
        "matrices": matrices,
        "negative_minors": negatives,
        "det_S": [str(x) for x in dets],
        "det_S_positive": all(x > 0 for x in dets),
    }


# -- conjecture experiment -----------------------------------------------------


def conjecture_vector(m: int) -> list[Fraction]:
    """u_m = [(-2)^m, C(m,m-1)(-2)^(m-1), ..., C(m,1)(-2), 1]."""
    return [Fraction(comb(m, m - t) * (-2) ** (m - t)) for t in range(m + 1)]


def conjecture_lambda(n: int, k: int) -> Fraction:
    lam = Fraction(1)
    for j in range(1, k + 1):
        if n % 2:
            lam *= 2 * j * (2 * j + 1) * (4 * j - 1) * (4 * j + 1)
        else:
            lam *= 2 * j * (2 * j - 1) * (4 * j - 3) * (4 * j - 1)
    return lam


def _parallel_ratio(w: list[Fraction], u: list[Fraction]) -> Fraction | None:
    """The scalar t with w == t u, if any."""
    pivot = next(i for i, x in enumerate(u) if x)
    t = w[pivot] / u[pivot]
    return t if all(a == t * b for a, b in zip(w, u)) else None


def eigenstructure(m: ExactMatrix) -> dict:
    """Characteristic polynomial and rational eigenpairs of an exact matrix."""
    import sympy

    sm = sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for x in m.entries])
    lam = sympy.Symbol("lambda")
    cp = sm.charpoly(lam)
    _, factors = sympy.factor_list(cp.as_expr(), lam)
    rational = []
    for fac, mult in factors:
        poly = sympy.Poly(fac, lam)
        if poly.degree() != 1:
            continue
        a, b = poly.all_coeffs()
        value = Fraction(str(-b / a))
        shifted = m - ExactMatrix.identity(m.rows).scale(value)
        vectors = nullspace(shifted)
        rational.append(
            {
                "value": str(value),
                "algebraic": int(mult),
                "geometric": kernel_dimension(shifted),
                "eigenvectors": [[str(x) for x in v] for v in vectors],
            }
        )
    rational.sort(key=lambda e: Fraction(e["value"]))
    return {
        "charpoly": [str(Fraction(str(c))) for c in cp.all_coeffs()],
        "factor_degrees": sorted(int(sympy.Poly(f, lam).degree()) for f, mult in factors for _ in range(mult)),
        "rational_eigenvalues": rational,
    }


def conjecture_check(n: int, with_eigenstructure: bool = True) -> list[dict]:
    """Test S_k u_{r-k} == lambda_k u_{r-k} exactly for every k (reported, not asserted)."""
    ts = transition_matrices(n)
    r = n // 2
    out = []
    for k in range(r + 1):
        S = ts.S[k]
        u = conjecture_vector(r - k)
        lam = conjecture_lambda(n, k)
        Su = S.matvec(u)
        ratio = _parallel_ratio(Su, u)
        entry = {
            "k": k,
            "lambda": str(lam),
            "holds": Su == [lam * x for x in u],
            "is_eigenvector": ratio is not None,
            "observed_eigenvalue": None if ratio is None else str(ratio),
            "S": [[str(x) for x in row] for row in S.tolist()],
            "u": [str(x) for x in u],
        }
        if with_eigenstructure:
            entry["eigenstructure"] = eigenstructure(S)
        out.append(entry)
    return out
