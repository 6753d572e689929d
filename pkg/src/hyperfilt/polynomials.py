"""Hyperspherical Legendre and Gegenbauer polynomials.

``P_{l,N}`` is the degree-l zonal polynomial of S^(N-1), normalized so that
P_{l,N}(1) = 1. Four independent routes are provided (explicit sum,
Rodrigues, integral representation, three-term recurrence); the recurrence
is the one to use in bulk.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import CapabilityError, DomainError, QuadratureError
from .geometry import _area, cartesian_to_angles
from .quadrature import gauss_gegenbauer_rule

MAX_COEFF_DEGREE = 60
_INT64_MAX = 2**63 - 1


def _check_params(l, N, min_N=2):
    if int(l) != l or l < 0:
        raise DomainError(f"degree must be a non-negative integer, got {l!r}")
    if int(N) != N or N < min_N:
        raise DomainError(f"ambient dimension must be an integer >= {min_N}, got {N!r}")
    return int(l), int(N)


def _as_t(t, open_interval=False):
    arr = np.asarray(t, dtype=float)
    bad = np.abs(arr) >= 1.0 if open_interval else np.abs(arr) > 1.0
    if np.any(bad) or np.any(np.isnan(arr)):
        side = "(-1, 1)" if open_interval else "[-1, 1]"
        raise DomainError(f"t must lie in {side}")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _pochhammer(a: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for k in range(j):
        out *= a + k
    return out


def _explicit_term_factors(l: int, N: int):
    # l! Gamma(a) / (4^j j! (l-2j)! Gamma(j+a)) with a = (N-1)/2, j = 0..l//2
    a = Fraction(N - 1, 2)
    return [
        Fraction(math.factorial(l), 4**j * math.factorial(j) * math.factorial(l - 2 * j))
        / _pochhammer(a, j)
        for j in range(l // 2 + 1)
    ]


def eval_legendre(l: int, N: int, t):
    """P_{l,N}(t) from the explicit finite sum

    P_{l,N}(t) = l! Gamma((N-1)/2) sum_j (-1)^j (1-t^2)^j t^(l-2j)
                 / (4^j j! (l-2j)! Gamma(j + (N-1)/2)).

    Reference route; loses accuracy to cancellation for large l. N = 2 is
    delegated to the Chebyshev closed form.
    """
    l, N = _check_params(l, N)
    x = _as_t(t)
    if N == 2:
        return eval_legendre_n2(l, x)
    s = 1.0 - x * x
    total = np.zeros_like(x)
    for j, c in enumerate(_explicit_term_factors(l, N)):
        total = total + (-1) ** j * float(c) * s**j * x ** (l - 2 * j)
    return _out(total)


def eval_legendre_n2(l: int, t):
    """P_{l,2}(t) = cos(l arccos t)."""
    l, _ = _check_params(l, 2)
    x = _as_t(t)
    return _out(np.cos(l * np.arccos(x)))


# --- exact rational polynomial helpers (coefficient lists, index = power) ---

def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pderiv(p):
    return [k * p[k] for k in range(1, len(p))] or [Fraction(0)]


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


@lru_cache(maxsize=None)
def legendre_coefficients_exact(l: int, N: int) -> tuple:
    """Exact monomial coefficients of P_{l,N} as Fractions (index k -> t^k)."""
    l, N = _check_params(l, N)
    if l > MAX_COEFF_DEGREE:
        raise CapabilityError(f"coefficient expansion limited to l <= {MAX_COEFF_DEGREE}")
    if N == 2:
        # Chebyshev T_l via T_{k+1} = 2t T_k - T_{k-1}
        prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
        if l == 0:
            return tuple(prev)
        for _ in range(l - 1):
            prev, cur = cur, _padd(_pmul([Fraction(0), Fraction(2)], cur), [-c for c in prev])
        return tuple(_trim(cur))
    one_minus_t2 = [Fraction(1), Fraction(0), Fraction(-1)]
    out = [Fraction(0)] * (l + 1)
    for j, c in enumerate(_explicit_term_factors(l, N)):
        term = [Fraction(0)] * (l - 2 * j) + [(-1) ** j * c]
        for _ in range(j):
            term = _pmul(term, one_minus_t2)
        out = _padd(out, term)
    return tuple(_trim(out))


def legendre_coefficients(l: int, N: int) -> np.ndarray:
    """Monomial coefficients of P_{l,N}; entry k multiplies t^k."""
    return np.array([float(c) for c in legendre_coefficients_exact(l, N)])


def _horner(coeffs, x):
    acc = np.zeros_like(x) + float(coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * x + float(c)
    return acc


@lru_cache(maxsize=None)
def rodrigues_polynomial(l: int, N: int) -> tuple:
    """Polynomial q with P_{l,N}(t) = q(t), obtained by differentiating
    (1-t^2)^(l+(N-3)/2) l times symbolically.

    Each step keeps the form p(t) (1-t^2)^a and uses
    d/dt [p (1-t^2)^a] = (1-t^2)^(a-1) [p' (1-t^2) - 2 a t p],
    so after l steps the remaining power (N-3)/2 cancels the prefactor.
    """
    l, N = _check_params(l, N)
    a = Fraction(2 * l + N - 3, 2)
    p = [Fraction(1)]
    for _ in range(l):
        p = _padd(
            _pmul(_pderiv(p), [Fraction(1), Fraction(0), Fraction(-1)]),
            _pmul([Fraction(0), -2 * a], p),
        )
        a -= 1
    # (-1)^l R_{l,N}, R = Gamma((N-1)/2) / (2^l Gamma(l + (N-1)/2))
    scale = Fraction((-1) ** l, 2**l) / _pochhammer(Fraction(N - 1, 2), l)
    return tuple(_trim([scale * c for c in p]))


def eval_legendre_rodrigues(l: int, N: int, t):
    """P_{l,N}(t) through the Rodrigues formula, for t in (-1, 1)."""
    l, N = _check_params(l, N)
    x = _as_t(t, open_interval=True)
    return _out(_horner(rodrigues_polynomial(l, N), x))


def eval_legendre_integral(l: int, N: int, t, quad_order: Optional[int] = None):
    """P_{l,N}(t) = |S^(N-3)|/|S^(N-2)| int_{-1}^{1} Re[(t + i sqrt(1-t^2) s)^l]
    (1-s^2)^((N-4)/2) ds, by Gauss-Gegenbauer quadrature in s."""
    l, N = _check_params(l, N, min_N=3)
    x = _as_t(t)
    if quad_order is None:
        quad_order = max(16, l + 4)
    if quad_order < l / 2 + 2:
        raise DomainError(f"quad_order must be >= l/2 + 2 = {l / 2 + 2}")
    rule = gauss_gegenbauer_rule(int(quad_order), (N - 4) / 2.0)
    z = x[..., None] + 1j * np.sqrt(1.0 - x * x)[..., None] * rule.nodes
    val = np.sum(rule.weights * z**l, axis=-1) * (_area(N - 2) / _area(N - 1))
    if np.max(np.abs(np.imag(val)), initial=0.0) > 1e-12:
        raise QuadratureError(f"imaginary part {np.max(np.abs(np.imag(val))):.3e} does not vanish")
    return _out(np.real(val))


def legendre_table(L: int, N: int, t) -> np.ndarray:
    """P_{0,N}(t), ..., P_{L,N}(t) stacked along a new leading axis.

    (l + N - 2) P_{l+1} = (2l + N - 2) t P_l - l P_{l-1}, which is the
    Gegenbauer recurrence rescaled to P_{l,N}(1) = 1.
    """
    x = np.asarray(t, dtype=float)
    out = np.empty((L + 1,) + x.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = x
    for l in range(1, L):
        out[l + 1] = ((2 * l + N - 2) * x * out[l] - l * out[l - 1]) / (l + N - 2)
    return out


def eval_legendre_recurrence(l: int, N: int, t):
    """P_{l,N}(t) in O(l) by the three-term recurrence."""
    l, N = _check_params(l, N)
    x = _as_t(t)
    p_prev, p = np.ones_like(x), x.copy()
    if l == 0:
        return _out(p_prev)
    for k in range(1, l):
        p_prev, p = p, ((2 * k + N - 2) * x * p - k * p_prev) / (k + N - 2)
    return _out(p)


def gegenbauer_binomial(l: int, alpha: float) -> float:
    """binom(l + 2 alpha - 1, l) = Gamma(l + 2 alpha) / (l! Gamma(2 alpha))."""
    out = 1.0
    for k in range(1, l + 1):
        out *= (2.0 * alpha - 1.0 + k) / k
    return out


def eval_gegenbauer(l: int, alpha: float, t, quad_order: Optional[int] = None):
    """C_l^alpha(t) from its integral definition

    C_l^alpha(t) = binom(l+2a-1, l) Gamma(a+1/2) / (sqrt(pi) Gamma(a))
                   int_{-1}^{1} (t + i sqrt(1-t^2) s)^l (1-s^2)^(a-1) ds.
    """
    if int(l) != l or l < 0:
        raise DomainError(f"degree must be a non-negative integer, got {l!r}")
    if not alpha > 0:
        raise DomainError(f"Gegenbauer index must be > 0, got {alpha!r}")
    l = int(l)
    x = _as_t(t)
    rule = gauss_gegenbauer_rule(int(quad_order or max(16, l + 4)), alpha - 1.0)
    z = x[..., None] + 1j * np.sqrt(1.0 - x * x)[..., None] * rule.nodes
    integral = np.real(np.sum(rule.weights * z**l, axis=-1))
    norm = math.exp(math.lgamma(alpha + 0.5) - math.lgamma(alpha)) / math.sqrt(math.pi)
    return _out(gegenbauer_binomial(l, alpha) * norm * integral)


def eval_gegenbauer_recurrence(l: int, alpha: float, t):
    """C_l^alpha(t) from (k+1) C_{k+1} = 2(k+alpha) t C_k - (k+2alpha-1) C_{k-1}."""
    x = _as_t(t)
    c_prev, c = np.ones_like(x), 2.0 * alpha * x
    if l == 0:
        return _out(c_prev)
    for k in range(1, l):
        c_prev, c = c, (2 * (k + alpha) * x * c - (k + 2 * alpha - 1) * c_prev) / (k + 1)
    return _out(c)


def dim_harmonics(l: int, N: int) -> int:
    """Dimension D(l, N) of the degree-l spherical harmonics on S^(N-1)."""
    l, N = _check_params(l, N)
    if N == 2:
        d = 1 if l == 0 else 2
    else:
        d = (2 * l + N - 2) * math.comb(l + N - 3, l) // (N - 2)
    if d > _INT64_MAX:
        raise CapabilityError(f"D({l}, {N}) exceeds the 64-bit integer range")
    return d


def dim_harmonics_binomial(l: int, N: int) -> int:
    """D(l, N) as binom(l+N-1, N-1) - binom(l+N-3, N-1)."""
    l, N = _check_params(l, N)
    low = math.comb(l + N - 3, N - 1) if l + N - 3 >= 0 else 0
    return math.comb(l + N - 1, N - 1) - low


class GeneratingSum(NamedTuple):
    partial_sum: float
    closed_form: float
    bound_constant: float
    error_bound: float


def poisson_generating_sum(r: float, t: float, N: int, L: int) -> GeneratingSum:
    """Truncated generating series sum_{l<=L} binom(l+N-3, N-3) P_{l,N}(t) r^l
    against its closed form (1 + r^2 - 2rt)^(-(N-2)/2).

    The error is bounded by C r^(L+1) / (1 - r) with
    C = binom(L+N-2, N-3) / (1-|r|)^(N-3), using |P_{l,N}| <= 1.
    """
    _, N = _check_params(0, N, min_N=3)
    if not abs(r) < 1.0:
        raise DomainError(f"generating function requires |r| < 1, got {r}")
    x = float(_as_t(t))
    P = legendre_table(int(L), N, x)
    partial = sum(math.comb(l + N - 3, N - 3) * float(P[l]) * r**l for l in range(L + 1))
    closed = (1.0 + r * r - 2.0 * r * x) ** (-(N - 2) / 2.0)
    ar = abs(r)
    C = math.comb(L + N - 2, N - 3) / (1.0 - ar) ** (N - 3)
    return GeneratingSum(partial, closed, C, C * ar ** (L + 1) / (1.0 - ar))


def gegenbauer_coefficients_exact(l: int, N: int) -> tuple:
    """Exact coefficients of C_l^((N-1)/2) = binom(l+N-2, l) P_{l,N+1}."""
    scale = math.comb(l + N - 2, l)
    return tuple(scale * c for c in legendre_coefficients_exact(l, N + 1))


def _horner_exact(coeffs, x: float) -> float:
    xf = Fraction(x)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * xf + c
    return float(acc)


def _eval_exact(coeffs, x: np.ndarray) -> np.ndarray:
    flat = [_horner_exact(coeffs, float(v)) for v in np.ravel(x)]
    return np.array(flat).reshape(np.shape(x))


def ode_residual(l: int, N: int, t):
    """(1-t^2) C'' - N t C' + l(l+N-1) C for C = C_l^((N-1)/2).

    C, C' and C'' come from exact rational coefficients and are each
    evaluated exactly at the (binary) t before rounding, so only the final
    combination happens in floating point. Monomial evaluation in doubles
    would drown the residual in cancellation beyond l ~ 12.
    """
    l, N = _check_params(l, N)
    x = _as_t(t, open_interval=True)
    c0 = list(gegenbauer_coefficients_exact(l, N))
    c1 = _pderiv(c0)
    c2 = _pderiv(c1)
    C, dC, d2C = _eval_exact(c0, x), _eval_exact(c1, x), _eval_exact(c2, x)
    return _out((1.0 - x * x) * d2C - N * x * dC + l * (l + N - 1) * C)


def ode_scale(l: int, N: int, t):
    """Magnitude the ODE residual is measured against: max(1, |C|)."""
    x = _as_t(t, open_interval=True)
    return _out(np.maximum(1.0, np.abs(_eval_exact(list(gegenbauer_coefficients_exact(l, N)), x))))


def assoc_legendre(l: int, m: int, x):
    """Associated Legendre P_l^m(x), Condon-Shortley phase, m >= 0."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = -(2 * k - 1) * s * pmm
    if l == m:
        return pmm
    p_prev, p = pmm, (2 * m + 1) * x * pmm
    for k in range(m + 1, l):
        p_prev, p = p, ((2 * k + 1) * x * p - (k + m) * p_prev) / (k - m + 1)
    return p


def sph2_harmonic(l: int, m: int, theta, psi):
    """Y_{l,m}(theta, psi) = N_lm P_l^m(cos theta) exp(i m psi),
    N_lm = sqrt((2l+1) (l-m)! / (l+m)!).

    With this normalization the mean of |Y_{l,m}|^2 over S^2 is 1.
    """
    if int(l) != l or l < 0 or int(m) != m:
        raise DomainError("degree and order must be integers with l >= 0")
    l, m = int(l), int(m)
    if abs(m) > l:
        raise DomainError(f"|m| must not exceed l (l={l}, m={m})")
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if np.any(theta < -1e-12) or np.any(theta > math.pi + 1e-12):
        raise DomainError("colatitude must lie in [0, pi]")
    if np.any(psi < -1e-12) or np.any(psi >= 2 * math.pi + 1e-12):
        raise DomainError("azimuth must lie in [0, 2 pi)")
    am = abs(m)
    norm = math.sqrt((2 * l + 1) * math.factorial(l - am) / math.factorial(l + am))
    y = norm * assoc_legendre(l, am, np.cos(theta)) * np.exp(1j * am * psi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return complex(y) if y.ndim == 0 else y


def addition_sum_s2(l: int, x, y) -> complex:
    """sum_m psi_{l,m}(x) conj(psi_{l,m}(y)) for the basis psi = Y / sqrt(|S^2|),
    orthonormal in dS. Should equal D(l,3) / |S^2| * P_{l,3}(x . y)."""
    ax = cartesian_to_angles(np.asarray(x, dtype=float))
    ay = cartesian_to_angles(np.asarray(y, dtype=float))
    total = 0j
    for m in range(-l, l + 1):
        total += sph2_harmonic(l, m, ax[0], ax[1]) * np.conj(sph2_harmonic(l, m, ay[0], ay[1]))
    return total / (4.0 * math.pi)
