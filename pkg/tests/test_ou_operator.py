import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oujordan.exact import DimensionMismatch
from oujordan.hermite import (
    HermitePoly,
    basis_of_grade,
    basis_up_to,
    degree_support,
    monomial_to_hermite,
    multiply_by_coordinate,
    project,
)
from oujordan.ou_operator import (
    OUContext,
    apply_A,
    apply_power,
    apply_projected,
    apply_projected_lower,
    apply_shifted,
)

from sym_oracle import X, ou_generator, poly_to_sympy

PARAMS = [(Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)), (Fraction(1), Fraction(3)), (Fraction(3, 2), Fraction(1, 2))]


def H(ctx, *pairs):
    return HermitePoly(ctx.d, ctx.rho, dict(pairs))


def test_context_validation():
    ctx = OUContext(3, 2, Fraction(2), Fraction(3))
    assert ctx.rho == Fraction(3, 2) and ctx.gamma == -4 and ctx.r == 1
    for bad in [dict(d=1, n=0), dict(d=3, n=-1), dict(d=3, n=1, c=0), dict(d=3, n=1, sigma2=-1)]:
        with pytest.raises(ValueError):
            OUContext(**bad)


def test_constants_are_killed():
    ctx = OUContext(3, 0)
    assert apply_A(ctx.basis((0, 0, 0)), ctx).is_zero()


@pytest.mark.parametrize("c,s2", PARAMS)
def test_z_is_eigenfunction(c, s2):
    ctx = OUContext(3, 1, c, s2)
    z = ctx.basis((0, 0, 1))
    assert apply_A(z, ctx) == z * (-c)


@pytest.mark.parametrize("c,s2", PARAMS)
def test_product_at_level_three(c, s2):
    ctx = OUContext(3, 3, c, s2)
    rho = ctx.rho
    expected = H(ctx, ((0, 2, 1), -1), ((1, 0, 2), -1), ((0, 0, 1), -rho), ((1, 0, 0), -rho))
    assert apply_shifted(ctx.basis((1, 1, 1)), ctx) == expected


def test_level_one_chain():
    ctx = OUContext(3, 1, Fraction(5, 3), Fraction(7))
    x, y, z = (ctx.basis(v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert apply_shifted(x, ctx) == -y
    assert apply_shifted(-y, ctx) == z
    assert apply_shifted(z, ctx).is_zero()
    assert apply_power(x, ctx, 0) == x
    assert apply_power(x, ctx, 2) == z
    assert apply_power(x, ctx, 3).is_zero()


def test_projected_examples():
    ctx = OUContext(3, 3, Fraction(2), Fraction(1))
    assert apply_projected(ctx.basis((0, 0, 3)), 3, ctx).is_zero()
    assert apply_projected(ctx.basis((1, 1, 1)), 3, ctx) == H(ctx, ((0, 2, 1), -1), ((1, 0, 2), -1))
    assert apply_projected(ctx.basis((2, 0, 0)), 2, ctx) == H(ctx, ((2, 0, 0), -2), ((1, 1, 0), -2))


def test_projected_projects_first():
    ctx = OUContext(3, 3)
    p = ctx.basis((1, 1, 1)) + ctx.basis((2, 0, 0))
    assert apply_projected(p, 3, ctx) == apply_projected(ctx.basis((1, 1, 1)), 3, ctx)


def test_dimension_mismatch():
    ctx = OUContext(3, 1)
    with pytest.raises(DimensionMismatch):
        apply_A(HermitePoly(2, 1, {(1, 0): 1}), ctx)
    with pytest.raises(DimensionMismatch):
        apply_shifted(HermitePoly(3, 2, {(1, 0, 0): 1}), ctx)
    with pytest.raises(ValueError):
        apply_power(ctx.basis((1, 0, 0)), ctx, -1)


def _grade_parts_3d(idx, ctx):
    """The two graded parts written out for one basis element (x, y, z)."""
    i, j, k = idx
    m, rho = i + j + k, ctx.rho
    same = {idx: (m - ctx.n) * ctx.c}
    if i:
        same[(i - 1, j + 1, k)] = same.get((i - 1, j + 1, k), 0) - i
    if j:
        same[(i, j - 1, k + 1)] = same.get((i, j - 1, k + 1), 0) - j
    lower = {}
    if i and j:
        lower[(i - 1, j - 1, k)] = -i * j * rho
    if j and k:
        lower[(i, j - 1, k - 1)] = -j * k * rho
    return HermitePoly(3, rho, same), HermitePoly(3, rho, lower)


def test_grading_law_3d():
    rnd = random.Random(1)
    for m in range(9):
        for c, s2 in PARAMS[:3]:
            ctx = OUContext(3, rnd.randint(0, 8), c, s2)
            for idx in basis_of_grade(3, m):
                phi = ctx.basis(idx)
                image = apply_shifted(phi, ctx)
                assert degree_support(image) <= {m, m - 2}
                same, lower = _grade_parts_3d(idx, ctx)
                assert project(image, m) == same == apply_projected(phi, m, ctx)
                assert project(image, m - 2) == lower == apply_projected_lower(phi, m, ctx)


def test_grading_law_2d():
    for c, s2 in PARAMS:
        for n in range(6):
            ctx = OUContext(2, n, c, s2)
            for i, j in basis_up_to(2, 8):
                image = apply_shifted(ctx.basis((i, j)), ctx)
                expected = {(i, j): (i + j - n) * c}
                if i:
                    expected[(i - 1, j + 1)] = -i
                    if j:
                        expected[(i - 1, j - 1)] = -i * j * ctx.rho
                assert image == HermitePoly(2, ctx.rho, expected)


index3 = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(index3, coeffs, max_size=6), st.sampled_from(PARAMS), st.integers(0, 10))
def test_shifted_is_gamma_minus_A(terms, params, n):
    ctx = OUContext(3, n, *params)
    p = HermitePoly(3, ctx.rho, terms)
    assert apply_shifted(p, ctx) == p * ctx.gamma - apply_A(p, ctx)
    if not p.is_zero():
        image = apply_A(p, ctx)
        assert image.is_zero() or image.degree() <= p.degree()


@pytest.mark.parametrize("c,s2", PARAMS[:3])
def test_generator_matches_differentiation_3d(c, s2):
    ctx = OUContext(3, 0, c, s2)
    for idx in basis_up_to(3, 4):
        phi = ctx.basis(idx)
        assert poly_to_sympy(apply_A(phi, ctx)) == ou_generator(poly_to_sympy(phi), 3, c, s2)


def test_generator_matches_differentiation_4d():
    ctx = OUContext(4, 0, Fraction(2), Fraction(1, 3))
    for idx in basis_up_to(4, 3):
        phi = ctx.basis(idx)
        assert poly_to_sympy(apply_A(phi, ctx)) == ou_generator(poly_to_sympy(phi), 4, ctx.c, ctx.sigma2)


def test_monomial_image_by_differentiation():
    # x*y*z pushed through the calculus rules, compared with A applied to the monomial itself
    ctx = OUContext(3, 0, Fraction(1), Fraction(2))
    p = HermitePoly(3, ctx.rho, {(0, 0, 0): 1})
    for s in range(3):
        p = multiply_by_coordinate(p, s)
    assert poly_to_sympy(p) == X[0] * X[1] * X[2]
    assert poly_to_sympy(apply_A(p, ctx)) == sympy.expand(ou_generator(X[0] * X[1] * X[2], 3, 1, 2))
    assert poly_to_sympy(HermitePoly(1, ctx.rho, monomial_to_hermite(3, ctx.rho).terms)).subs(X[0], 2) == 8
