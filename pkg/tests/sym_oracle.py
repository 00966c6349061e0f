"""Independent symbolic oracles, built on sympy and nothing from the package.

Hermite polynomials come from the Rodrigues formula and the generator is
applied by literal differentiation, so these share no code path with the
recurrence and the Hermite-calculus rules under test.
"""

from fractions import Fraction

import sympy

X = sympy.symbols("x1:5")


def rational(q: Fraction) -> sympy.Rational:
    return sympy.Rational(q.numerator, q.denominator)


def rodrigues(n: int, rho, var=X[0]):
    rho = rational(Fraction(rho))
    w = sympy.exp(-var**2 / (2 * rho))
    return sympy.expand(sympy.simplify((-rho) ** n * sympy.exp(var**2 / (2 * rho)) * sympy.diff(w, var, n)))


def tensor_hermite(idx, rho):
    out = sympy.Integer(1)
    for s, n in enumerate(idx):
        out *= rodrigues(n, rho, X[s])
    return sympy.expand(out)


def poly_to_sympy(p):
    """A HermitePoly as an explicit polynomial in x1..xd, via Rodrigues."""
    out = sympy.Integer(0)
    for idx, coeff in p.terms.items():
        out += rational(coeff) * tensor_hermite(idx, p.rho)
    return sympy.expand(out)


def ou_generator(expr, d: int, c, sigma2):
    """Drift -c x_s + x_{s+1} on d/dx_s, diffusion sigma2 * Laplacian."""
    c, sigma2 = rational(Fraction(c)), rational(Fraction(sigma2))
    xs = X[:d]
    out = sympy.Integer(0)
    for s in range(d):
        drift = -c * xs[s] + (xs[s + 1] if s + 1 < d else 0)
        out += drift * sympy.diff(expr, xs[s]) + sigma2 * sympy.diff(expr, xs[s], 2)
    return sympy.expand(out)
