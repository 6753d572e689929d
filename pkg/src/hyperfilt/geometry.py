"""Hyperspherical coordinates, surface areas and rotations on S^(N-1).

Throughout the package ``N`` is the ambient dimension: the sphere is
S^(N-1) = {x in R^N : |x| = 1}. Polar volume decomposes as
dV_N = |x|^(N-1) d|x| dS_(N-1); only the surface measure is used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapabilityError, DomainError

_SQRT_PI = math.sqrt(math.pi)

UNIT_TOL = 1e-9
ORTHO_TOL = 1e-10


def gamma_fn(s: float) -> float:
    """Euler Gamma function for real s > 0.

    Integer and half-integer arguments use exact factorial forms,
    Gamma(n) = (n-1)! and Gamma(n + 1/2) = (2n)! / (4^n n!) * sqrt(pi).
    """
    s = float(s)
    if not s > 0.0 or not math.isfinite(s):
        raise DomainError(f"gamma_fn requires s > 0, got {s!r}")
    twice = 2.0 * s
    if twice == round(twice) and s < 171.0:
        k = int(round(twice))
        if k % 2 == 0:
            return float(math.factorial(k // 2 - 1))
        n = (k - 1) // 2
        return math.factorial(2 * n) / (4**n * math.factorial(n)) * _SQRT_PI
    try:
        return math.gamma(s)
    except OverflowError:
        raise CapabilityError(f"Gamma({s}) overflows double precision") from None


def _area(n: int) -> float:
    # |S^(n-1)|, valid down to n = 1 where S^0 = {-1, 1} has counting measure 2.
    return 2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def surface_area(N: int) -> float:
    """Surface area |S^(N-1)| = 2 pi^(N/2) / Gamma(N/2)."""
    if int(N) != N or N < 2:
        raise DomainError(f"ambient dimension must be an integer >= 2, got {N!r}")
    return _area(int(N))


def surface_area_recursive(N: int) -> float:
    """|S^(N-1)| built up from |S^1| = 2 pi via

    |S^(k-1)| = sqrt(pi) Gamma((k-1)/2) / Gamma(k/2) * |S^(k-2)|.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"ambient dimension must be an integer >= 2, got {N!r}")
    area = 2.0 * math.pi
    for k in range(3, int(N) + 1):
        area *= _SQRT_PI * gamma_fn((k - 1) / 2.0) / gamma_fn(k / 2.0)
    return area


def _check_unit(coords: np.ndarray, tol: float = UNIT_TOL) -> None:
    dev = np.abs(np.linalg.norm(coords, axis=-1) - 1.0)
    if dev.size and dev.max() > tol:
        raise DomainError(f"point(s) not on the unit sphere: |norm - 1| = {dev.max():.3e}")


def angles_to_cartesian(angles, N: Optional[int] = None) -> np.ndarray:
    """Map hyperspherical angles (theta_1, ..., theta_(N-1)) to unit vectors.

    x_1 = cos th_1, x_k = sin th_1 ... sin th_(k-1) cos th_k, and
    x_N = sin th_1 ... sin th_(N-2) sin th_(N-1). Leading axes broadcast.
    """
    a = np.asarray(angles, dtype=float)
    if a.ndim == 0:
        raise DomainError("angles must be a vector")
    if N is None:
        N = a.shape[-1] + 1
    if a.shape[-1] != N - 1 or N < 2:
        raise DomainError(f"expected {N - 1} angles for N={N}, got {a.shape[-1]}")
    eps = 1e-12
    polar, azimuth = a[..., :-1], a[..., -1]
    if np.any(polar < -eps) or np.any(polar > math.pi + eps):
        raise DomainError("polar angles must lie in [0, pi]")
    if np.any(azimuth < -eps) or np.any(azimuth >= 2.0 * math.pi + eps):
        raise DomainError("azimuthal angle must lie in [0, 2 pi)")

    out = np.empty(a.shape[:-1] + (N,))
    sin_prod = np.ones(a.shape[:-1])
    for k in range(N - 1):
        out[..., k] = sin_prod * np.cos(a[..., k])
        sin_prod = sin_prod * np.sin(a[..., k])
    out[..., N - 1] = sin_prod
    return out


def cartesian_to_angles(p) -> np.ndarray:
    """Inverse of :func:`angles_to_cartesian`.

    Where a chart is singular (all remaining coordinates vanish) the
    remaining angles are set to 0.
    """
    x = np.asarray(p.coords if isinstance(p, SpherePoint) else p, dtype=float)
    if x.ndim == 0 or x.shape[-1] < 2:
        raise DomainError("need a vector of length >= 2")
    _check_unit(x)
    N = x.shape[-1]
    # tail[k] = |(x_k, ..., x_N)|, accumulated from the end for accuracy
    tail = np.sqrt(np.cumsum(x[..., ::-1] ** 2, axis=-1)[..., ::-1])
    angles = np.zeros(x.shape[:-1] + (N - 1,))
    alive = np.ones(x.shape[:-1], dtype=bool)
    for k in range(N - 2):
        alive = alive & (tail[..., k] > 1e-15)
        theta = np.arctan2(tail[..., k + 1], x[..., k])
        angles[..., k] = np.where(alive, theta, 0.0)
    phi = np.arctan2(x[..., N - 1], x[..., N - 2])
    phi = np.where(phi < 0.0, phi + 2.0 * math.pi, phi) + 0.0
    phi = np.where(phi >= 2.0 * math.pi, 0.0, phi)
    alive = alive & (tail[..., N - 2] > 1e-15)
    angles[..., N - 2] = np.where(alive, phi, 0.0)
    return angles


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """A unit vector in R^N, optionally carrying its hyperspherical angles."""

    coords: np.ndarray
    angles: Optional[np.ndarray] = None

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1 or c.size < 2:
            raise DomainError("SpherePoint needs a 1-d vector of length >= 2")
        _check_unit(c, 1e-12)
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        if self.angles is not None:
            a = np.array(self.angles, dtype=float)
            if np.max(np.abs(angles_to_cartesian(a, c.size) - c)) > 1e-12:
                raise DomainError("angles inconsistent with coordinates")
            a.flags.writeable = False
            object.__setattr__(self, "angles", a)

    @property
    def N(self) -> int:
        return self.coords.size

    @classmethod
    def from_angles(cls, angles, N: Optional[int] = None) -> "SpherePoint":
        return cls(angles_to_cartesian(angles, N), angles)

    def with_angles(self) -> "SpherePoint":
        return SpherePoint(self.coords, cartesian_to_angles(self.coords))


def lift_point(t: float, xi_sub) -> np.ndarray:
    """Return t e_N + sqrt(1 - t^2) (xi_sub, 0), a point of S^(N-1).

    ``xi_sub`` is a point of S^(N-2) (shape (..., N-1)); ``t`` broadcasts
    against its leading axes.
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("lift_point requires |t| <= 1")
    sub = np.asarray(xi_sub.coords if isinstance(xi_sub, SpherePoint) else xi_sub, dtype=float)
    s = np.sqrt(1.0 - t * t)
    head = s[..., None] * sub
    tail = np.broadcast_to(t, head.shape[:-1])[..., None]
    return np.concatenate([head, tail], axis=-1)


def check_orthogonal(R, tol: float = ORTHO_TOL) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DomainError("rotation must be a square matrix")
    dev = np.max(np.abs(R.T @ R - np.eye(R.shape[0])))
    if dev > tol:
        raise DomainError(f"matrix is not orthogonal: max |R^T R - I| = {dev:.3e}")
    return R


def apply_rotation(R, p) -> np.ndarray:
    """Apply an orthogonal matrix to point(s) p (shape (..., N))."""
    R = check_orthogonal(R)
    x = np.asarray(p.coords if isinstance(p, SpherePoint) else p, dtype=float)
    if x.shape[-1] != R.shape[0]:
        raise DomainError(f"dimension mismatch: R is {R.shape[0]}x{R.shape[0]}, point has {x.shape[-1]}")
    return x @ R.T


def plane_rotation(N: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation by ``angle`` in the (x_i, x_j) coordinate plane (0-based)."""
    R = np.eye(N)
    c, s = math.cos(angle), math.sin(angle)
    R[i, i] = c
    R[j, j] = c
    R[j, i] = s
    R[i, j] = -s
    return R


def random_rotation(N: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SO(N)."""
    q, r = np.linalg.qr(rng.standard_normal((N, N)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_points(n: int, N: int, rng: np.random.Generator) -> np.ndarray:
    """n points uniformly distributed on S^(N-1)."""
    x = rng.standard_normal((n, N))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
