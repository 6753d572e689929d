import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hyperfilt import polynomials as P
from hyperfilt.errors import CapabilityError, DomainError

ROUTES = [P.eval_legendre, P.eval_legendre_rodrigues, P.eval_legendre_integral, P.eval_legendre_recurrence]


def _sympy_legendre(l, N):
    """P_{l,N} from the Rodrigues formula, differentiated symbolically."""
    t = sp.symbols("t")
    a = sp.Rational(N - 3, 2)
    expr = (-1) ** l * sp.gamma(a + 1) / (2**l * sp.gamma(l + a + 1)) * (1 - t**2) ** (-a) * sp.diff(
        (1 - t**2) ** (l + a), t, l
    )
    return t, sp.simplify(expr)


# ---------------------------------------------------------------- Legendre


@pytest.mark.parametrize("route", [P.eval_legendre, P.eval_legendre_integral, P.eval_legendre_recurrence])
@pytest.mark.parametrize("l", [0, 1, 4, 9])
@pytest.mark.parametrize("N", [3, 4, 6])
def test_pole_value(route, l, N):
    assert abs(route(l, N, 1.0) - 1) < 1e-12


@pytest.mark.parametrize("route", ROUTES)
def test_examples(route):
    assert route(2, 3, 0.5) == pytest.approx(-0.125, abs=1e-12)
    assert route(1, 5, 0.37) == pytest.approx(0.37, abs=1e-12)
    assert route(0, 4, -0.2) == pytest.approx(1.0, abs=1e-12)


def test_cross_route_examples():
    assert abs(P.eval_legendre_rodrigues(3, 5, 0.2) - P.eval_legendre(3, 5, 0.2)) < 1e-10
    assert abs(P.eval_legendre_integral(4, 4, -0.3) - P.eval_legendre(4, 4, -0.3)) < 1e-9
    assert abs(P.eval_legendre_recurrence(10, 6, 0.9) - P.eval_legendre(10, 6, 0.9)) < 1e-11


def test_n2_chebyshev():
    assert P.eval_legendre_n2(0, 0.4) == 1.0
    assert P.eval_legendre_n2(1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert P.eval_legendre_n2(3, 0.5) == pytest.approx(-1.0, abs=1e-14)
    t = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(P.eval_legendre(5, 2, t), special.eval_chebyt(5, t), atol=1e-13)


@pytest.mark.parametrize("l", range(12))
def test_n3_is_classical_legendre(l):
    t = np.linspace(-1, 1, 17)
    np.testing.assert_allclose(P.eval_legendre_recurrence(l, 3, t), special.eval_legendre(l, t), atol=1e-13)


@pytest.mark.parametrize("l, N", [(2, 4), (3, 5), (5, 7), (4, 8)])
def test_against_sympy_rodrigues(l, N):
    t, expr = _sympy_legendre(l, N)
    for x in (-0.8, -0.1, 0.35, 0.9):
        oracle = float(expr.subs(t, sp.Rational(x).limit_denominator(10**6)))
        assert P.eval_legendre(l, N, x) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("fn", ROUTES)
def test_domain_errors(fn):
    with pytest.raises(DomainError):
        fn(2, 4, 1.5)


def test_rodrigues_endpoints_rejected():
    with pytest.raises(DomainError):
        P.eval_legendre_rodrigues(2, 4, 1.0)


def test_integral_needs_n3():
    with pytest.raises(DomainError):
        P.eval_legendre_integral(2, 2, 0.3)


def test_coefficients():
    assert P.legendre_coefficients_exact(0, 5) == (Fraction(1),)
    assert P.legendre_coefficients_exact(1, 5) == (Fraction(0), Fraction(1))
    assert P.legendre_coefficients_exact(2, 3) == (Fraction(-1, 2), Fraction(0), Fraction(3, 2))
    with pytest.raises(CapabilityError):
        P.legendre_coefficients_exact(200, 3)


def test_table_matches_single():
    t = np.linspace(-1, 1, 9)
    tab = P.legendre_table(8, 5, t)
    for l in range(9):
        np.testing.assert_allclose(tab[l], P.eval_legendre(l, 5, t), atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(l=st.integers(0, 15), N=st.integers(3, 8), t=st.floats(-1, 1))
def test_parity_and_bound(l, N, t):
    a = P.eval_legendre_recurrence(l, N, t)
    b = P.eval_legendre_recurrence(l, N, -t)
    assert abs(b - (-1) ** l * a) < 1e-12
    assert abs(a) <= 1 + 1e-12


@settings(max_examples=60, deadline=None)
@given(l=st.integers(1, 15), N=st.integers(3, 8), t=st.floats(-0.999, 0.999))
def test_three_term_recurrence(l, N, t):
    lhs = (l + N - 2) * P.eval_legendre(l + 1, N, t)
    rhs = (2 * l + N - 2) * t * P.eval_legendre(l, N, t) - l * P.eval_legendre(l - 1, N, t)
    assert abs(lhs - rhs) < 1e-9


# ---------------------------------------------------------------- Gegenbauer


def test_gegenbauer_examples():
    assert P.eval_gegenbauer(0, 0.7, 0.3) == pytest.approx(1.0, abs=1e-13)
    assert P.eval_gegenbauer(1, 1.5, 0.2) == pytest.approx(0.6, abs=1e-13)
    assert P.eval_gegenbauer(2, 0.5, 0.5) == pytest.approx(-0.125, abs=1e-13)
    with pytest.raises(DomainError):
        P.eval_gegenbauer(2, 0.0, 0.5)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5, 3.7])
@pytest.mark.parametrize("l", [0, 1, 3, 8, 12])
def test_gegenbauer_scipy_oracle(l, alpha):
    t = np.linspace(-1, 1, 13)
    expect = special.eval_gegenbauer(l, alpha, t)
    np.testing.assert_allclose(P.eval_gegenbauer(l, alpha, t), expect, atol=1e-10 * max(1, np.max(np.abs(expect))))
    np.testing.assert_allclose(P.eval_gegenbauer_recurrence(l, alpha, t), expect, rtol=1e-12, atol=1e-12)


def test_gegenbauer_binomial():
    assert P.gegenbauer_binomial(3, 1.0) == pytest.approx(math.comb(4, 3))
    assert P.gegenbauer_binomial(2, 0.5) == pytest.approx(1.0)


# ---------------------------------------------------------------- dimensions


@pytest.mark.parametrize("l, N, D", [(0, 7, 1), (1, 3, 3), (2, 3, 5), (0, 2, 1), (1, 2, 2), (5, 2, 2), (2, 4, 9), (3, 5, 30)])
def test_dim_harmonics(l, N, D):
    assert P.dim_harmonics(l, N) == D
    assert P.dim_harmonics_binomial(l, N) == D


def test_dim_overflow():
    with pytest.raises(CapabilityError):
        P.dim_harmonics(10**6, 40)


@settings(max_examples=80, deadline=None)
@given(l=st.integers(0, 60), N=st.integers(2, 12))
def test_dim_identity(l, N):
    assert P.dim_harmonics(l, N) == P.dim_harmonics_binomial(l, N)


# ---------------------------------------------------------------- generating function


def test_generating_examples():
    g = P.poisson_generating_sum(0.0, 0.3, 5, 10)
    assert g.partial_sum == 1.0 and g.closed_form == 1.0
    g = P.poisson_generating_sum(0.5, 1.0, 4, 60)
    assert g.closed_form == pytest.approx(4.0, abs=1e-14)
    g = P.poisson_generating_sum(0.3, 0.2, 3, 30)
    assert abs(g.partial_sum - g.closed_form) < 1e-12
    with pytest.raises(DomainError):
        P.poisson_generating_sum(1.0, 0.2, 3, 10)


@settings(max_examples=60, deadline=None)
@given(N=st.integers(3, 8), r=st.floats(0, 0.6), t=st.floats(-1, 1), L=st.integers(0, 30))
def test_generating_within_bound(N, r, t, L):
    g = P.poisson_generating_sum(r, t, N, L)
    assert abs(g.partial_sum - g.closed_form) <= g.error_bound * (1 + 1e-9) + 1e-13


# ---------------------------------------------------------------- ODE


def test_ode_examples():
    assert P.ode_residual(0, 4, 0.3) == 0.0
    assert abs(P.ode_residual(1, 3, 0.4)) < 1e-12
    assert abs(P.ode_residual(5, 5, -0.7)) < 1e-9


@pytest.mark.parametrize("l, N", [(3, 3), (6, 5), (9, 8)])
def test_ode_coefficients_sympy(l, N):
    t = sp.symbols("t")
    C = sp.gegenbauer(l, sp.Rational(N - 1, 2), t)
    resid = sp.expand((1 - t**2) * sp.diff(C, t, 2) - N * t * sp.diff(C, t) + l * (l + N - 1) * C)
    assert resid == 0
    coeffs = sp.Poly(C, t).all_coeffs()[::-1]
    mine = P.gegenbauer_coefficients_exact(l, N)
    assert [sp.Rational(c.numerator, c.denominator) for c in mine] == [sp.Rational(c) for c in coeffs]


# ---------------------------------------------------------------- S^2 harmonics


def test_sph2_examples():
    assert P.sph2_harmonic(0, 0, 0.4, 1.0) == pytest.approx(1.0)
    assert P.sph2_harmonic(1, 0, 0.0, 0.0) == pytest.approx(math.sqrt(3))
    # P_1^1(x) = -sqrt(1-x^2) with Condon-Shortley phase; N_11 = sqrt(3/2)
    assert P.sph2_harmonic(1, 1, math.pi / 2, 0.0) == pytest.approx(-math.sqrt(1.5))
    with pytest.raises(DomainError):
        P.sph2_harmonic(1, 2, 0.3, 0.1)


def test_assoc_legendre_oracle():
    x = sp.symbols("x")
    for l in range(6):
        for m in range(l + 1):
            expr = (-1) ** m * (1 - x**2) ** sp.Rational(m, 2) * sp.diff(sp.legendre(l, x), x, m)
            for v in (-0.7, 0.1, 0.55):
                assert P.assoc_legendre(l, m, v) == pytest.approx(float(expr.subs(x, v)), abs=1e-12)


def test_sph2_orthonormal_mean():
    from hyperfilt.quadrature import sphere_grid
    from hyperfilt.geometry import cartesian_to_angles

    grid = sphere_grid(3, 10)
    ang = cartesian_to_angles(grid.points)
    Y = [P.sph2_harmonic(l, m, ang[:, 0], ang[:, 1]) for l in range(4) for m in range(-l, l + 1)]
    gram = np.array([[np.sum(grid.weights * a * np.conj(b)) for b in Y] for a in Y]) / (4 * math.pi)
    np.testing.assert_allclose(gram, np.eye(len(Y)), atol=1e-12)
