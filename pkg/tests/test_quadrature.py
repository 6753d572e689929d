import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_jacobi

from hyperfilt import quadrature as Q
from hyperfilt.errors import ContractError, DomainError
from hyperfilt.geometry import random_points
from hyperfilt.polynomials import eval_legendre_recurrence


def test_rule_examples():
    r = Q.gauss_gegenbauer_rule(1, 0.0)
    np.testing.assert_array_equal(r.nodes, [0.0])
    assert r.weights[0] == pytest.approx(2.0, abs=1e-15)
    r = Q.gauss_gegenbauer_rule(2, 0.0)
    np.testing.assert_allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1, 1], atol=1e-15)
    r = Q.gauss_gegenbauer_rule(2, 0.5)
    np.testing.assert_allclose(r.nodes, [-0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(r.weights, [math.pi / 4] * 2, atol=1e-15)


def test_rule_domain():
    with pytest.raises(DomainError):
        Q.gauss_gegenbauer_rule(0)
    with pytest.raises(DomainError):
        Q.gauss_gegenbauer_rule(3, -1.0)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("m", [3, 10, 41, 200])
def test_rule_against_scipy(m, beta):
    x, w = roots_jacobi(m, beta, beta)
    r = Q.gauss_gegenbauer_rule(m, beta)
    np.testing.assert_allclose(r.nodes, x, atol=2e-15)
    # scipy's endpoint weights carry ~1e-11 relative error at m=200; see the mpmath test below
    np.testing.assert_allclose(r.weights, w, rtol=1e-10, atol=1e-15 * w.max())


def test_rule_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    m = 200
    r = Q.gauss_gegenbauer_rule(m, 0.0)
    for i in (0, 1, 7, 60, 100):
        x = mp.findroot(lambda t: mp.legendre(m, t), mp.mpf(r.nodes[i]))
        w = 2 / ((1 - x**2) * mp.diff(lambda t: mp.legendre(m, t), x) ** 2)
        assert abs(r.nodes[i] - float(x)) < 1e-15
        assert abs(r.weights[i] / float(w) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 25), beta=st.sampled_from([-0.5, 0.0, 0.5, 1.0, 1.5, 2.0]))
def test_rule_moments(m, beta):
    r = Q.gauss_gegenbauer_rule(m, beta)
    for k in range(0, 2 * m, 2):
        exact = math.exp(math.lgamma((k + 1) / 2) + math.lgamma(beta + 1) - math.lgamma(k / 2 + beta + 1.5))
        assert r.integrate(r.nodes**k) == pytest.approx(exact, rel=1e-12)
    assert abs(r.integrate(r.nodes ** (2 * m - 1))) < 1e-14
    np.testing.assert_array_equal(r.nodes, -r.nodes[::-1])
    np.testing.assert_array_equal(r.weights, r.weights[::-1])


def test_circle_grid():
    g = Q.sphere_grid(2, 4)
    assert g.size == 8
    np.testing.assert_allclose(g.weights, math.pi / 4)
    assert g.weights.sum() == pytest.approx(2 * math.pi, abs=1e-14)


@pytest.mark.parametrize("N, m, area, tol", [(3, 8, 4 * math.pi, 1e-12), (5, 6, 8 * math.pi**2 / 3, 1e-10), (4, 5, 2 * math.pi**2, 1e-12)])
def test_grid_mass(N, m, area, tol):
    g = Q.sphere_grid(N, m)
    assert abs(g.weights.sum() - area) < tol
    assert g.size == 2 * m * m ** (N - 2)
    assert g.guaranteed_degree == 2 * m - 1
    np.testing.assert_allclose(np.linalg.norm(g.points, axis=1), 1, atol=1e-15)


def test_grid_for_degree():
    g = Q.grid_for_degree(3, 9)
    assert g.guaranteed_degree >= 9


@settings(max_examples=40, deadline=None)
@given(N=st.integers(2, 5), m=st.integers(1, 5), seed=st.integers(0, 2**31))
def test_grid_monomial_exactness(N, m, seed):
    rng = np.random.default_rng(seed)
    g = Q.sphere_grid(N, m)
    a = rng.multinomial(int(rng.integers(0, 2 * m)), np.ones(N) / N)
    val = np.sum(g.weights * np.prod(g.points**a, axis=1))
    assert abs(val - Q.sphere_monomial_integral(a)) < 1e-12


def test_integrate_examples():
    g = Q.sphere_grid(3, 8)
    one = Q.SampledFunction(g, np.ones(g.size))
    assert Q.integrate_sphere(one) == pytest.approx(4 * math.pi, abs=1e-12)
    x1 = Q.SampledFunction.from_callable(g, lambda p: p[:, 0])
    assert abs(Q.integrate_sphere(x1)) < 1e-12
    x1sq = Q.SampledFunction.from_callable(g, lambda p: p[:, 0] ** 2)
    assert Q.integrate_sphere(x1sq) == pytest.approx(4 * math.pi / 3, abs=1e-12)


def test_sampled_shape_contract():
    g = Q.sphere_grid(3, 3)
    with pytest.raises(ContractError):
        Q.SampledFunction(g, np.ones(g.size + 1))


def test_inner_product_examples():
    g = Q.sphere_grid(4, 5)
    one = Q.SampledFunction(g, np.ones(g.size))
    zero = Q.SampledFunction(g, np.zeros(g.size))
    assert Q.inner_product(one, one).real == pytest.approx(2 * math.pi**2, abs=1e-12)
    assert Q.inner_product(one, zero) == 0
    g3 = Q.sphere_grid(3, 8)
    t = g3.points[:, 2]
    a = Q.SampledFunction(g3, eval_legendre_recurrence(2, 3, t))
    b = Q.SampledFunction(g3, eval_legendre_recurrence(3, 3, t))
    assert abs(Q.inner_product(a, b)) < 1e-10
    with pytest.raises(ContractError):
        Q.inner_product(a, one)


def test_inner_product_conjugate_linear():
    rng = np.random.default_rng(0)
    g = Q.sphere_grid(3, 4)
    f = Q.SampledFunction(g, rng.standard_normal(g.size) + 1j * rng.standard_normal(g.size))
    h = Q.SampledFunction(g, rng.standard_normal(g.size))
    assert Q.inner_product(f, h) == pytest.approx(np.conj(Q.inner_product(h, f)))
    assert Q.l2_norm(f) ** 2 == pytest.approx(Q.inner_product(f, f).real)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_zonal_orthogonality_on_grid(N):
    g = Q.sphere_grid(N, 6)
    from hyperfilt.geometry import surface_area
    from hyperfilt.polynomials import dim_harmonics

    eta = random_points(1, N, np.random.default_rng(N))[0]
    t = np.clip(g.points @ eta, -1, 1)
    for l in range(6):
        for j in range(6):
            val = np.sum(g.weights * eval_legendre_recurrence(l, N, t) * eval_legendre_recurrence(j, N, t))
            expect = surface_area(N) / dim_harmonics(l, N) if l == j else 0.0
            assert abs(val - expect) < 1e-10
