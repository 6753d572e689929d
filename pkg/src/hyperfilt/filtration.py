"""Harmonic projection, Gegenbauer (Poisson-type) filtration and zonal convolution.

Sampled functions live on a :class:`~hyperfilt.quadrature.SphereGrid`; every
operator here is an integral against a zonal kernel K(xi . eta), evaluated
by the grid's quadrature at the grid points or at arbitrary target points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import CapabilityError, ContractError, DomainError
from .geometry import _area, surface_area
from .polynomials import dim_harmonics, eval_legendre_recurrence
from .quadrature import QuadratureRule1D, SampledFunction, gauss_gegenbauer_rule

_CHUNK_ELEMENTS = 1 << 21


# ---------------------------------------------------------------- kernels


def _check_N(N) -> int:
    if int(N) != N or N < 2:
        raise DomainError(f"ambient dimension must be an integer >= 2, got {N!r}")
    return int(N)


def gegenbauer_kernel(N: int, r: float, t):
    """G_N(r, t) = |S^(N-2)|/|S^(N-1)| (1 - r^2) / (1 + r^2 - 2rt)^(N/2).

    Normalized so that its integral against (1 - t^2)^((N-3)/2) on [-1, 1]
    equals one.
    """
    N = _check_N(N)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"smoothing parameter must satisfy 0 <= r < 1, got {r}")
    x = np.asarray(t, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("t must lie in [-1, 1]")
    ratio = _area(N - 1) / _area(N)
    val = ratio * (1.0 - r * r) / (1.0 + r * r - 2.0 * r * x) ** (N / 2.0)
    return float(val) if val.ndim == 0 else val


def kernel_normalization(N: int, r: float, order: Optional[int] = None) -> float:
    """int_{-1}^{1} G_N(r, t) (1 - t^2)^((N-3)/2) dt.

    Without ``order`` an adaptive algebraic-weight integrator is used; with
    it, an ``order``-point Gauss-Gegenbauer rule.
    """
    N = _check_N(N)
    beta = (N - 3) / 2.0
    if order is not None:
        rule = gauss_gegenbauer_rule(int(order), beta)
        return float(np.sum(rule.weights * gegenbauer_kernel(N, r, rule.nodes)))
    # peak of width ~(1 - r) at t = 1; split so the adaptive rule sees it
    split = max(-0.5, 1.0 - 50.0 * (1.0 - r))
    fn = lambda t: gegenbauer_kernel(N, r, t)
    with warnings.catch_warnings():
        # QUADPACK flags roundoff once it is at the 1e-14 level
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _split_quad(fn, beta, split)


def _split_quad(fn, beta, split):
    lo, _ = integrate.quad(
        lambda t: fn(t) * (1 - t) ** beta,
        -1.0,
        split,
        weight="alg",
        wvar=(beta, 0.0),
        epsabs=1e-14,
        epsrel=1e-13,
        limit=400,
    )
    # on [split, 1] write (1-t^2)^beta = (1+t)^beta (1-t)^beta
    hi, _ = integrate.quad(
        lambda t: fn(t) * (1 + t) ** beta,
        split,
        1.0,
        weight="alg",
        wvar=(0.0, beta),
        epsabs=1e-14,
        epsrel=1e-13,
        limit=400,
    )
    return lo + hi


class KernelDecay(NamedTuple):
    eps: np.ndarray
    sup_values: np.ndarray
    monotone: bool


def kernel_limit_check(
    N: int, t0: float, eps: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4), samples: int = 2001
) -> KernelDecay:
    """Sup of G_N(1 - eps, t) over t in [-1, t0] for a decreasing eps schedule.

    Away from t = 1 the kernel vanishes as r -> 1-; ``monotone`` reports
    whether the sups decrease strictly along the schedule.
    """
    N = _check_N(N)
    if not t0 < 1.0:
        raise DomainError(f"t0 must be < 1, got {t0}")
    t0 = max(t0, -1.0)
    ts = np.append(np.linspace(-1.0, t0, samples), t0)
    sups = np.array([np.max(gegenbauer_kernel(N, 1.0 - e, ts)) for e in eps])
    return KernelDecay(np.asarray(eps, dtype=float), sups, bool(np.all(np.diff(sups) < 0)))


# ---------------------------------------------------------------- profiles


@dataclass(frozen=True, eq=False)
class ZonalProfile:
    """h(eta) = phi(eta . pole): a function symmetric about ``pole``.

    ``phi`` maps an array of t in [-1, 1] to values.
    """

    pole: np.ndarray
    phi: Callable

    def __post_init__(self):
        p = np.array(self.pole, dtype=float)
        if p.ndim != 1 or abs(np.linalg.norm(p) - 1.0) > 1e-12:
            raise DomainError("pole must be a unit vector")
        p.flags.writeable = False
        object.__setattr__(self, "pole", p)

    @property
    def N(self) -> int:
        return self.pole.size

    def __call__(self, points) -> np.ndarray:
        t = np.clip(np.asarray(points, dtype=float) @ self.pole, -1.0, 1.0)
        return self.phi(t)

    @classmethod
    def gegenbauer(cls, N: int, r: float, pole=None) -> "ZonalProfile":
        """Profile G_N(r, t) / |S^(N-2)|; convolving with it is the filtration."""
        scale = 1.0 / _area(N - 1)
        return cls(_pole(N, pole), lambda t: scale * gegenbauer_kernel(N, r, t))

    @classmethod
    def legendre(cls, l: int, N: int, pole=None) -> "ZonalProfile":
        return cls(_pole(N, pole), lambda t: eval_legendre_recurrence(l, N, t))

    @classmethod
    def polynomial(cls, coeffs, N: int, pole=None) -> "ZonalProfile":
        c = np.asarray(coeffs)
        return cls(_pole(N, pole), lambda t: np.polynomial.polynomial.polyval(t, c))

    @classmethod
    def from_samples(cls, rule: QuadratureRule1D, values, pole) -> "ZonalProfile":
        """Interpolating polynomial through samples of phi at the nodes of ``rule``."""
        from scipy.interpolate import BarycentricInterpolator

        values = np.asarray(values)
        if values.shape != rule.nodes.shape:
            raise ContractError("profile samples must align with the rule nodes")
        interp = BarycentricInterpolator(rule.nodes, values)
        return cls(np.asarray(pole, dtype=float), lambda t: interp(np.asarray(t, dtype=float)))


def _pole(N, pole):
    if pole is None:
        pole = np.zeros(N)
        pole[-1] = 1.0
    return np.asarray(pole, dtype=float)


@dataclass(frozen=True)
class Spectrum:
    """Per-degree values indexed by l = 0..L."""

    N: int
    coeffs: np.ndarray

    @property
    def L(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class FilterConfig:
    r: float
    L_max: Optional[int] = None
    n_ambient: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.r < 1.0:
            raise DomainError(f"smoothing parameter must satisfy 0 <= r < 1, got {self.r}")
        if self.L_max is not None and (int(self.L_max) != self.L_max or self.L_max < 0):
            raise DomainError(f"L_max must be a non-negative integer, got {self.L_max!r}")


# ---------------------------------------------------------------- quadrature engine


def _gram_blocks(targets: np.ndarray, points: np.ndarray):
    """Yield (slice, xi . eta) blocks without BLAS so sums are reproducible."""
    nt, ng = targets.shape[0], points.shape[0]
    rows = max(1, _CHUNK_ELEMENTS // max(ng, 1))
    for start in range(0, nt, rows):
        tg = targets[start : start + rows]
        T = tg[:, 0, None] * points[None, :, 0]
        for k in range(1, points.shape[1]):
            T += tg[:, k, None] * points[None, :, k]
        np.clip(T, -1.0, 1.0, out=T)
        yield slice(start, start + tg.shape[0]), T


def _resolve_targets(f: SampledFunction, targets):
    if targets is None:
        return f.grid.points
    x = np.asarray(targets, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != f.grid.N:
        raise ContractError(f"targets have dimension {x.shape[1]}, grid has N={f.grid.N}")
    return x


def apply_zonal_kernel(f: SampledFunction, kernel: Callable, targets=None) -> np.ndarray:
    """(K f)(xi) = sum_j w_j K(xi . eta_j) f(eta_j) for each target xi."""
    x = _resolve_targets(f, targets)
    wf = f.grid.weights * f.values
    out = np.empty(x.shape[0], dtype=np.result_type(wf, float))
    for sl, T in _gram_blocks(x, f.grid.points):
        out[sl] = np.sum(kernel(T) * wf, axis=1)
    return out


def _degree_components(f: SampledFunction, L: int, targets=None) -> np.ndarray:
    """Rows l = 0..L of (F_l f)(targets), sharing one recurrence sweep."""
    x = _resolve_targets(f, targets)
    N = f.grid.N
    wf = f.grid.weights * f.values
    area = surface_area(N)
    scale = [dim_harmonics(l, N) / area for l in range(L + 1)]
    out = np.empty((L + 1, x.shape[0]), dtype=np.result_type(wf, float))
    for sl, T in _gram_blocks(x, f.grid.points):
        p_prev, p = None, np.ones_like(T)
        for l in range(L + 1):
            if l == 1:
                p_prev, p = p, T
            elif l > 1:
                p_prev, p = p, ((2 * l + N - 4) * T * p - (l - 1) * p_prev) / (l + N - 3)
            out[l, sl] = scale[l] * np.sum(p * wf, axis=1)
    return out


def _require(f: SampledFunction, extra: int, what: str) -> None:
    band = f.band_limit if f.band_limit is not None else 0
    needed = extra + band
    if f.grid.guaranteed_degree < needed:
        order = needed // 2 + 1
        raise CapabilityError(
            f"{what} needs a grid exact to degree {needed} "
            f"(base order m >= {order}); grid has degree {f.grid.guaranteed_degree}"
        )


def _wrap(f: SampledFunction, values, band_limit, targets):
    if targets is not None:
        return values
    return SampledFunction(f.grid, values, band_limit)


# ---------------------------------------------------------------- projection


def project_component(f: SampledFunction, l: int, targets=None):
    """Degree-l harmonic component

    (F_l f)(xi) = D(l,N)/|S^(N-1)| int P_{l,N}(xi . eta) f(eta) dS(eta).

    Returns a SampledFunction on f's grid, or a plain array when
    ``targets`` is given.
    """
    if int(l) != l or l < 0:
        raise DomainError(f"degree must be a non-negative integer, got {l!r}")
    l = int(l)
    _require(f, l, f"projection onto degree {l}")
    vals = _degree_components(f, l, targets)[l]
    return _wrap(f, vals, l, targets)


def decompose(f: SampledFunction, L_max: int, targets=None) -> list:
    """Components F_0 f, ..., F_{L_max} f."""
    _require(f, L_max, f"decomposition up to degree {L_max}")
    rows = _degree_components(f, L_max, targets)
    return [_wrap(f, rows[l], l, targets) for l in range(L_max + 1)]


def spectrum(f: SampledFunction, L_max: int) -> Spectrum:
    """L2 norms ||F_l f|| for l = 0..L_max."""
    comps = decompose(f, L_max)
    w = f.grid.weights
    norms = [math.sqrt(max(0.0, float(np.sum(w * np.abs(c.values) ** 2)))) for c in comps]
    return Spectrum(f.grid.N, np.array(norms))


# ---------------------------------------------------------------- filtration


def filtrate_direct(f: SampledFunction, r: float, targets=None):
    """(1/|S^(N-2)|) int G_N(r, xi . eta) f(eta) dS(eta) by grid quadrature."""
    N = f.grid.N
    _require(f, 0, "direct filtration")
    inv = 1.0 / _area(N - 1)
    vals = apply_zonal_kernel(f, lambda T: inv * gegenbauer_kernel(N, r, T), targets)
    return _wrap(f, vals, f.band_limit, targets)


def filtrate_spectral(f: SampledFunction, r: float, L_max: int, targets=None):
    """sum_{l <= L_max} r^l (F_l f)."""
    if f.band_limit is not None and L_max < f.band_limit:
        raise CapabilityError(
            f"L_max={L_max} is below the declared band limit {f.band_limit}"
        )
    _require(f, L_max, f"spectral filtration to degree {L_max}")
    N = f.grid.N
    area = surface_area(N)
    scale = [r**l * dim_harmonics(l, N) / area for l in range(L_max + 1)]

    def kernel(T):
        acc = np.full_like(T, scale[0])
        p_prev, p = np.ones_like(T), T
        for l in range(1, L_max + 1):
            if l > 1:
                p_prev, p = p, ((2 * l + N - 4) * T * p - (l - 1) * p_prev) / (l + N - 3)
            acc += scale[l] * p
        return acc

    vals = apply_zonal_kernel(f, kernel, targets)
    return _wrap(f, vals, f.band_limit, targets)


def filtrate(f: SampledFunction, cfg: FilterConfig, method: Optional[str] = None, targets=None):
    """Gegenbauer filtration of f with smoothing parameter ``cfg.r``.

    ``method`` is "spectral" (needs ``cfg.L_max``) or "direct"; by default
    spectral when L_max is set.
    """
    if cfg.n_ambient is not None and cfg.n_ambient != f.grid.N:
        raise ContractError(f"config is for N={cfg.n_ambient}, grid has N={f.grid.N}")
    if method is None:
        method = "spectral" if cfg.L_max is not None else "direct"
    if method == "spectral":
        if cfg.L_max is None:
            raise CapabilityError("spectral filtration needs L_max")
        return filtrate_spectral(f, cfg.r, int(cfg.L_max), targets)
    if method == "direct":
        return filtrate_direct(f, cfg.r, targets)
    raise DomainError(f"unknown filtration method {method!r}")


# ---------------------------------------------------------------- convolution


def zonal_convolve(f: SampledFunction, h: ZonalProfile, targets=None):
    """(f * h)(xi) = int f(eta) conj(phi(xi . eta)) dS(eta)."""
    if h.N != f.grid.N:
        raise ContractError(f"profile is for N={h.N}, grid has N={f.grid.N}")
    _require(f, 0, "zonal convolution")
    vals = apply_zonal_kernel(f, lambda T: np.conj(h.phi(T)), targets)
    return _wrap(f, vals, f.band_limit, targets)


def funk_hecke_multiplier(phi: Callable, l: int, N: int, order: Optional[int] = None) -> float:
    """|S^(N-2)| int conj(phi(t)) P_{l,N}(t) (1 - t^2)^((N-3)/2) dt."""
    N = _check_N(N)
    rule = gauss_gegenbauer_rule(int(order or max(256, 2 * l + 8)), (N - 3) / 2.0)
    vals = np.conj(phi(rule.nodes)) * eval_legendre_recurrence(l, N, rule.nodes)
    total = _area(N - 1) * np.sum(rule.weights * vals)
    return complex(total) if np.iscomplexobj(total) else float(total)


def closed_form_factor(l: int, N: int) -> float:
    """sqrt(Gamma(l+N-2) (2l+N-2) / (l! Gamma(N-1))), which equals sqrt(D(l, N))."""
    return math.exp(
        0.5 * (math.lgamma(l + N - 2) + math.log(2 * l + N - 2) - math.lgamma(l + 1) - math.lgamma(N - 1))
    )


def convolution_spectrum(h, l: int, N: int, order: Optional[int] = None):
    """(multiplier, claimed_factor) for degree l.

    ``multiplier`` is the eigenvalue of convolution with h on degree-l
    harmonics; ``claimed_factor`` is the closed-form coefficient reported
    next to it for comparison.
    """
    phi = h.phi if isinstance(h, ZonalProfile) else h
    return funk_hecke_multiplier(phi, l, N, order), closed_form_factor(l, N)


def zonal_spectrum(h, L_max: int, N: int, order: Optional[int] = None) -> Spectrum:
    phi = h.phi if isinstance(h, ZonalProfile) else h
    return Spectrum(N, np.array([funk_hecke_multiplier(phi, l, N, order) for l in range(L_max + 1)]))
