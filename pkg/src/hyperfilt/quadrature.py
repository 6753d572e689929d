"""Gauss-Gegenbauer rules and tensor-product quadrature on S^(N-1).

The sphere grids follow the slicing dS_(N-1) = (1 - t^2)^((N-3)/2) dt dS_(N-2)
with xi = t e_N + sqrt(1 - t^2) xi', recursing down to a uniform rule on
the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ContractError, DomainError, QuadratureError
from .geometry import lift_point, surface_area


def gegenbauer_mass(beta: float) -> float:
    """Integral of (1 - t^2)^beta over [-1, 1]."""
    if beta <= -1.0:
        raise DomainError(f"weight exponent must exceed -1, got {beta}")
    return math.exp(
        0.5 * math.log(math.pi) + math.lgamma(beta + 1.0) - math.lgamma(beta + 1.5)
    )


def _offdiag(m: int, beta: float) -> np.ndarray:
    # sqrt of the monic recurrence coefficients for Jacobi(beta, beta).
    k = np.arange(1, m, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        b2 = k * (k + 2 * beta) / ((2 * k + 2 * beta + 1) * (2 * k + 2 * beta - 1))
    if m > 1:
        # k = 1 is 0/0 at beta = -1/2; closed form
        b2[0] = 1.0 / (2 * beta + 3)
    return np.sqrt(b2)


def _orthonormal_values(x: np.ndarray, b: np.ndarray, mass: float, m: int):
    """Orthonormal polynomials p_0..p_(m-1) at x, plus p_m and p_m' (unscaled by b_m)."""
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mass))
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    sq = p * p
    for k in range(m):
        bk = b[k - 1] if k >= 1 else 0.0
        p_next = x * p - bk * p_prev
        dp_next = p + x * dp - bk * dp_prev
        if k + 1 < m:
            bn = b[k]
            p_next /= bn
            dp_next /= bn
            sq = sq + p_next * p_next
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return sq, p, dp


@dataclass(frozen=True, eq=False)
class QuadratureRule1D:
    """Gauss rule on [-1, 1] for the weight (1 - t^2)^beta."""

    nodes: np.ndarray
    weights: np.ndarray
    beta: float
    order: int

    def integrate(self, values) -> float:
        return float(np.sum(self.weights * np.asarray(values)))

    def __call__(self, fn):
        return np.sum(self.weights * fn(self.nodes))


@lru_cache(maxsize=256)
def gauss_gegenbauer_rule(m: int, beta: float = 0.0) -> QuadratureRule1D:
    """m-point Gauss rule for (1 - t^2)^beta via Golub-Welsch.

    Nodes come from the symmetric Jacobi matrix, are polished by Newton
    steps on the orthonormal recurrence, and the weights are recomputed
    from the Christoffel function. Exact for degree <= 2m - 1.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"node count must be a positive integer, got {m!r}")
    m = int(m)
    beta = float(beta)
    mass = gegenbauer_mass(beta)
    if m == 1:
        nodes = np.zeros(1)
        weights = np.array([mass])
    else:
        b = _offdiag(m, beta)
        try:
            x = eigh_tridiagonal(np.zeros(m), b, eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise QuadratureError(f"eigen-solve failed for m={m}, beta={beta}: {exc}") from exc
        x = np.sort(x)
        for _ in range(10):
            _, pm, dpm = _orthonormal_values(x, b, mass, m)
            step = pm / dpm
            x = x - step
            if np.max(np.abs(step)) < 1e-15:
                break
        sq, pm, _ = _orthonormal_values(x, b, mass, m)
        resid = np.max(np.abs(pm)) / np.max(np.abs(sq)) ** 0.5
        if not np.all(np.isfinite(x)) or resid > 1e-10:
            raise QuadratureError(
                f"Newton polish did not converge (m={m}, beta={beta}, residual={resid:.3e})"
            )
        weights = 1.0 / sq
        # exact symmetry about t = 0
        x = 0.5 * (x - x[::-1])
        weights = 0.5 * (weights + weights[::-1])
        if m % 2:
            x[m // 2] = 0.0
        nodes = x
        if np.any(np.diff(nodes) <= 0):
            raise QuadratureError(f"nodes not strictly increasing (m={m}, beta={beta})")
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule1D(nodes, weights, beta, m)


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Tensor-product quadrature grid on S^(N-1).

    Points are ordered lexicographically by level, outermost (the t = x_N
    slice) first and the circle azimuth last. ``orders`` lists the node
    count per level in that order.
    """

    N: int
    points: np.ndarray
    weights: np.ndarray
    orders: tuple
    guaranteed_degree: int

    def __len__(self) -> int:
        return self.weights.size

    @property
    def size(self) -> int:
        return self.weights.size

    def same_as(self, other: "SphereGrid") -> bool:
        return self is other or (
            self.N == other.N
            and self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )


def circle_rule(m: int):
    """2m equispaced azimuths on S^1 with equal weights pi/m."""
    phi = np.pi * np.arange(2 * m) / m
    pts = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    return pts, np.full(2 * m, np.pi / m)


def sphere_grid(N: int, m: int) -> SphereGrid:
    """Product Gauss-Gegenbauer x uniform-azimuth grid on S^(N-1).

    Integrates polynomials of total degree <= 2m - 1 exactly. The grid has
    2m * m^(N-2) points.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"ambient dimension must be an integer >= 2, got {N!r}")
    if int(m) != m or m < 1:
        raise DomainError(f"base order must be a positive integer, got {m!r}")
    N, m = int(N), int(m)
    pts, wts = circle_rule(m)
    orders = [2 * m]
    for k in range(3, N + 1):
        rule = gauss_gegenbauer_rule(m, (k - 3) / 2.0)
        n_sub = wts.size
        t = np.repeat(rule.nodes, n_sub)
        sub = np.tile(pts, (m, 1))
        pts = lift_point(t, sub)
        wts = np.repeat(rule.weights, n_sub) * np.tile(wts, m)
        orders.insert(0, m)
    pts.flags.writeable = False
    wts.flags.writeable = False
    return SphereGrid(N, pts, wts, tuple(orders), 2 * m - 1)


def grid_for_degree(N: int, degree: int) -> SphereGrid:
    """Smallest product grid exact for polynomials of the given degree."""
    return sphere_grid(N, max(1, (degree + 2) // 2))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Samples of a function at the points of a grid.

    ``band_limit`` is the caller's declaration of the highest harmonic
    degree present; ``None`` means unknown.
    """

    grid: SphereGrid
    values: np.ndarray
    band_limit: Optional[int] = None

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        if v.shape != (self.grid.size,):
            raise ContractError(
                f"values has shape {v.shape}, grid has {self.grid.size} points"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: SphereGrid, fn, band_limit: Optional[int] = None):
        return cls(grid, fn(grid.points), band_limit)

    def norm(self) -> float:
        return l2_norm(self)


def integrate_sphere(f: SampledFunction):
    """Quadrature sum of f over its grid."""
    v = np.asarray(f.values)
    if v.shape != f.grid.weights.shape:
        raise ContractError("values not aligned with grid")
    total = np.sum(f.grid.weights * v)
    return complex(total) if np.iscomplexobj(total) else float(total)


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """<f, g> = integral of f conj(g) dS."""
    if not f.grid.same_as(g.grid):
        raise ContractError("inner product of functions sampled on different grids")
    return complex(np.sum(f.grid.weights * f.values * np.conj(g.values)))


def l2_norm(f: SampledFunction) -> float:
    return math.sqrt(max(0.0, float(np.sum(f.grid.weights * np.abs(f.values) ** 2))))


def sphere_monomial_integral(exponents) -> float:
    """Closed-form integral of x^a over S^(N-1) (N = len(exponents))."""
    a = [int(e) for e in exponents]
    if any(e % 2 for e in a):
        return 0.0
    logv = sum(math.lgamma((e + 1) / 2.0) for e in a) - math.lgamma((sum(a) + len(a)) / 2.0)
    return 2.0 * math.exp(logv)


def sphere_area_check(grid: SphereGrid) -> float:
    """Relative deviation of the grid's total weight from |S^(N-1)|."""
    area = surface_area(grid.N)
    return abs(float(np.sum(grid.weights)) - area) / area
