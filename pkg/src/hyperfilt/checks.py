"""Invariant suite behind ``hyperfilt check``.

Every check is seeded and sized to run in a few seconds, so a report is
reproducible line for line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from . import filtration as F
from . import geometry as G
from . import polynomials as P
from . import quadrature as Q

SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    worst: float
    tol: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.suite}.{self.name}  worst={self.worst:.3e}  tol={self.tol:.1e}"
        return text + (f"  {self.note}" if self.note else "")


def _result(suite, name, worst, tol, note=""):
    worst = float(worst)
    return CheckResult(suite, name, worst, tol, bool(worst <= tol), note)


def random_band_limited(grid: Q.SphereGrid, band: int, rng, per_degree: int = 3) -> Q.SampledFunction:
    """Random combination of zonal harmonics P_{l,N}(. a_k), l <= band, random poles."""
    N = grid.N
    vals = np.zeros(grid.size)
    for l in range(band + 1):
        for a in G.random_points(per_degree, N, rng):
            t = np.clip(grid.points @ a, -1.0, 1.0)
            vals += rng.standard_normal() * P.eval_legendre_recurrence(l, N, t)
    return Q.SampledFunction(grid, vals, band)


# ---------------------------------------------------------------- geometry


def check_geometry() -> List[CheckResult]:
    rng = np.random.default_rng(SEED)
    out = []
    worst = max(
        abs(G.surface_area_recursive(N) - G.surface_area(N)) / G.surface_area(N) for N in range(2, 13)
    )
    out.append(_result("geometry", "surface_area_recursion", worst, 1e-12))

    worst = 0.0
    for N in (3, 4, 5, 7):
        x = G.random_points(500, N, rng)
        back = G.angles_to_cartesian(G.cartesian_to_angles(x))
        worst = max(worst, np.max(np.abs(back - x)))
    out.append(_result("geometry", "angles_round_trip", worst, 1e-10))

    worst = 0.0
    for N in (3, 4, 5):
        grid = Q.sphere_grid(N, 5)
        R = G.random_rotation(N, rng)
        poles = G.random_points(3, N, rng)

        def fn(x):
            return sum(P.eval_legendre_recurrence(l, N, np.clip(x @ a, -1, 1)) * (l + 1.5) ** 2
                       for l, a in enumerate(poles))

        plain = Q.integrate_sphere(Q.SampledFunction(grid, fn(grid.points)))
        rotated = Q.integrate_sphere(Q.SampledFunction(grid, fn(G.apply_rotation(R, grid.points))))
        worst = max(worst, abs(plain - rotated))
    out.append(_result("geometry", "rotation_invariant_measure", worst, 1e-10))
    return out


# ---------------------------------------------------------------- polynomials


def check_polynomials() -> List[CheckResult]:
    rng = np.random.default_rng(SEED + 1)
    out = []
    grid_N = (3, 4, 5, 7)

    worst = 0.0
    for N in grid_N:
        for l in range(16):
            worst = max(
                worst,
                abs(P.eval_legendre(l, N, 1.0) - 1),
                abs(P.eval_legendre_integral(l, N, 1.0) - 1),
                abs(P.eval_legendre_recurrence(l, N, 1.0) - 1),
            )
    out.append(_result("polynomials", "pole_normalization", worst, 1e-12))

    worst = 0.0
    for N in grid_N:
        for l in range(16):
            t = rng.uniform(-0.999, 0.999, 20)
            routes = [
                P.eval_legendre(l, N, t),
                P.eval_legendre_rodrigues(l, N, t),
                P.eval_legendre_integral(l, N, t),
                P.eval_legendre_recurrence(l, N, t),
            ]
            for i in range(4):
                for j in range(i + 1, 4):
                    worst = max(worst, np.max(np.abs(routes[i] - routes[j])))
    out.append(_result("polynomials", "four_way_agreement", worst, 1e-9))

    worst = 0.0
    for N in grid_N:
        t = rng.uniform(-1, 1, 20)
        for l in range(16):
            worst = max(worst, np.max(np.abs(P.eval_legendre(l, N, -t) - (-1) ** l * P.eval_legendre(l, N, t))))
    out.append(_result("polynomials", "parity", worst, 1e-12))

    worst = 0.0
    for N in grid_N:
        t = rng.uniform(-1, 1, 20)
        for l in range(16):
            lhs = P.eval_gegenbauer(l, (N - 2) / 2.0, t)
            rhs = math.comb(l + N - 3, l) * P.eval_legendre(l, N, t)
            worst = max(worst, np.max(np.abs(lhs - rhs)))
    out.append(_result("polynomials", "gegenbauer_relation", worst, 1e-10))

    worst = 0.0
    for N in (3, 4):
        for r in (0.0, 0.25, 0.5):
            for t in (-1.0, -0.3, 0.4, 1.0):
                g = P.poisson_generating_sum(r, t, N, 40)
                worst = max(worst, abs(g.partial_sum - g.closed_form))
    out.append(_result("polynomials", "generating_function_L40", worst, 1e-10))

    worst = 0.0
    for N in (3, 4, 5, 7):
        for t in (-0.9, 0.2, 0.9):
            for r in (0.3, 0.5):
                for L in (5, 10, 20):
                    g = P.poisson_generating_sum(r, t, N, L)
                    worst = max(worst, abs(g.partial_sum - g.closed_form) / g.error_bound)
    out.append(_result("polynomials", "generating_function_within_bound", worst, 1.0))

    worst = 0.0
    ts = np.linspace(-0.95, 0.95, 9)
    for N in range(2, 9):
        for l in range(0, 21, 2 if N > 4 else 1):
            worst = max(worst, np.max(np.abs(P.ode_residual(l, N, ts)) / P.ode_scale(l, N, ts)))
    out.append(_result("polynomials", "eigenfunction_ode", worst, 1e-9))

    mismatches = sum(
        P.dim_harmonics(l, N) != P.dim_harmonics_binomial(l, N) for N in range(2, 12) for l in range(30)
    )
    out.append(_result("polynomials", "dimension_identity", mismatches, 0))

    worst = 0.0
    for l in range(9):
        for x, y in zip(G.random_points(12, 3, rng), G.random_points(12, 3, rng)):
            lhs = P.addition_sum_s2(l, x, y)
            rhs = P.dim_harmonics(l, 3) / (4 * math.pi) * P.eval_legendre(l, 3, float(np.clip(x @ y, -1, 1)))
            worst = max(worst, abs(lhs - rhs))
    out.append(_result("polynomials", "addition_theorem_s2", worst, 1e-10))
    return out


# ---------------------------------------------------------------- quadrature


def check_quadrature() -> List[CheckResult]:
    rng = np.random.default_rng(SEED + 2)
    out = []

    worst = 0.0
    for N in (3, 4, 5, 7):
        rule = Q.gauss_gegenbauer_rule(14, (N - 3) / 2.0)
        table = P.legendre_table(12, N, rule.nodes)
        gram = (table * rule.weights) @ table.T
        expect = np.diag(
            [G.surface_area(N) / (P.dim_harmonics(l, N) * G.surface_area(N - 1)) for l in range(13)]
        )
        worst = max(worst, np.max(np.abs(gram - expect)))
    out.append(_result("quadrature", "weighted_orthogonality", worst, 1e-10))

    worst = 0.0
    for N in (3, 4, 5):
        grid = Q.sphere_grid(N, 7)
        eta = G.random_points(1, N, rng)[0]
        t = np.clip(grid.points @ eta, -1, 1)
        for l in range(7):
            for j in range(7):
                val = np.sum(grid.weights * P.eval_legendre_recurrence(l, N, t) * P.eval_legendre_recurrence(j, N, t))
                expect = G.surface_area(N) / P.dim_harmonics(l, N) if l == j else 0.0
                worst = max(worst, abs(val - expect))
    out.append(_result("quadrature", "zonal_orthogonality", worst, 1e-9))

    worst = 0.0
    for N, m in ((2, 4), (3, 4), (4, 3), (5, 3)):
        grid = Q.sphere_grid(N, m)
        for _ in range(25):
            a = rng.multinomial(int(rng.integers(0, 2 * m)), np.ones(N) / N)
            val = np.sum(grid.weights * np.prod(grid.points**a, axis=1))
            worst = max(worst, abs(val - Q.sphere_monomial_integral(a)))
    out.append(_result("quadrature", "polynomial_exactness", worst, 1e-11))

    worst = 0.0
    for m in (1, 2, 5, 10, 33):
        for beta in (-0.5, 0.0, 0.5, 2.0):
            rule = Q.gauss_gegenbauer_rule(m, beta)
            worst = max(
                worst,
                np.max(np.abs(rule.nodes + rule.nodes[::-1])),
                np.max(np.abs(rule.weights - rule.weights[::-1])),
                abs(rule.weights.sum() / Q.gegenbauer_mass(beta) - 1),
            )
    out.append(_result("quadrature", "rule_symmetry_and_mass", worst, 1e-12))
    return out


# ---------------------------------------------------------------- filtration


def check_filtration() -> List[CheckResult]:
    rng = np.random.default_rng(SEED + 3)
    out = []

    worst = 0.0
    for N in (3, 4, 5, 7):
        for r in (0.0, 0.3, 0.7, 0.9, 0.99):
            worst = max(worst, abs(F.kernel_normalization(N, r) - 1.0))
    out.append(_result("filtration", "kernel_normalization", worst, 1e-10))

    bad = 0
    for N in (3, 4, 5, 7):
        decay = F.kernel_limit_check(N, 0.0)
        bad += (not decay.monotone) + int(np.any(decay.sup_values[:-1] / decay.sup_values[1:] < 10.0))
    out.append(_result("filtration", "kernel_decay_away_from_pole", bad, 0))

    idem = adj = contr = 0.0
    for N, band, m in ((3, 5, 6), (4, 4, 5), (5, 3, 4)):
        grid = Q.sphere_grid(N, m)
        for _ in range(3):
            f = random_band_limited(grid, band, rng)
            g = random_band_limited(grid, band, rng)
            for l in range(band + 1):
                Ff = F.project_component(f, l)
                idem = max(idem, np.max(np.abs(F.project_component(Ff, l).values - Ff.values)))
                Fg = F.project_component(g, l)
                adj = max(adj, abs(Q.inner_product(Ff, g) - Q.inner_product(f, Fg)))
                contr = max(contr, Q.l2_norm(Ff) - Q.l2_norm(f))
    out.append(_result("filtration", "projection_idempotent", idem, 1e-8))
    out.append(_result("filtration", "projection_self_adjoint", adj, 1e-8))
    out.append(_result("filtration", "projection_contraction", max(contr, 0.0), 1e-10))

    worst = 0.0
    for N, band, m in ((3, 8, 20), (4, 5, 18)):
        grid = Q.sphere_grid(N, m)
        f = random_band_limited(grid, band, rng)
        tg = G.random_points(20, N, rng)
        for r in (0.2, 0.5):
            d = F.filtrate_direct(f, r, targets=tg)
            s = F.filtrate_spectral(f, r, band, targets=tg)
            worst = max(worst, np.max(np.abs(d - s)))
    out.append(_result("filtration", "direct_equals_spectral", worst, 1e-8))

    worst = 0.0
    for N, band, m in ((3, 5, 6), (4, 4, 5), (5, 3, 4), (7, 2, 3)):
        grid = Q.sphere_grid(N, m)
        f = random_band_limited(grid, band, rng)
        coeffs = rng.standard_normal(2 * m - band)
        h = F.ZonalProfile.polynomial(coeffs, N, G.random_points(1, N, rng)[0])
        conv = F.decompose(F.zonal_convolve(f, h), band)
        comps = F.decompose(f, band)
        for l in range(band + 1):
            mult, _ = F.convolution_spectrum(h, l, N)
            worst = max(worst, np.max(np.abs(conv[l].values - mult * comps[l].values)))
    out.append(_result("filtration", "spectral_multiplicativity", worst, 1e-8))

    worst = 0.0
    for N, band, m in ((3, 4, 16), (4, 3, 14)):
        grid = Q.sphere_grid(N, m)
        f = random_band_limited(grid, band, rng)
        for r in (0.1, 0.4):
            a = F.filtrate_direct(f, r).values
            b = F.zonal_convolve(f, F.ZonalProfile.gegenbauer(N, r)).values
            worst = max(worst, np.max(np.abs(a - b)))
    out.append(_result("filtration", "filtration_is_convolution", worst, 1e-10))
    return out


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "geometry": check_geometry,
    "polynomials": check_polynomials,
    "quadrature": check_quadrature,
    "filtration": check_filtration,
}


def run(suite: str = "all") -> List[CheckResult]:
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        results.extend(SUITES[name]())
    return results


def multiplier_report(N: int, L: int, h: F.ZonalProfile) -> List[str]:
    """Measured multiplier next to the closed-form claimed factor, per degree."""
    lines = []
    for l in range(L + 1):
        mult, claimed = F.convolution_spectrum(h, l, N)
        lines.append(f"INFO  N={N} l={l}  multiplier={mult:.10e}  claimed_factor={claimed:.10e}")
    return lines
