"""Distance distributions for the RIS deployment region and the satellite
shell, their fractional moments, and the samplers the link simulator draws
from.

Geometry conventions: the user sits at the origin, which is the center of
the deployment cylinder's base. The satellite shell is the sphere of
radius ``earth_radius + altitude`` centered at ``(0, 0, -earth_radius)``.
All lengths are meters; unit conversion happens at the config boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DivergentMomentError, DomainError
from .specfun import exp_integral_nu, gauss_2f1

EARTH_RADIUS_M = 6_371_000.0


class Point3D(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class CylinderGeometry:
    """RIS deployment region: a vertical cylinder of base radius
    ``base_radius`` and height ``height`` standing on the user.

    ``inner_radius`` > 0 selects the annulus variant (RISs excluded from a
    disk around the user); it is only meaningful for a flat region and is
    rejected when ``height`` > 0.
    """

    base_radius: float
    height: float
    inner_radius: float = 0.0

    def __post_init__(self) -> None:
        if not self.base_radius > 0:
            raise DomainError(f"base_radius must be > 0, got {self.base_radius}")
        if self.height < 0:
            raise DomainError(f"height must be >= 0, got {self.height}")
        if self.inner_radius < 0:
            raise DomainError(f"inner_radius must be >= 0, got {self.inner_radius}")
        if self.inner_radius > 0 and self.height > 0:
            raise DomainError("inner_radius > 0 requires a flat region (height == 0)")
        if self.inner_radius >= self.base_radius:
            raise DomainError("inner_radius must be < base_radius")

    @property
    def max_distance(self) -> float:
        return math.hypot(self.base_radius, self.height)


@dataclass(frozen=True)
class Constellation:
    """Satellite shell described only by its population and altitude."""

    satellites: int
    altitude: float
    earth_radius: float = EARTH_RADIUS_M

    def __post_init__(self) -> None:
        if self.satellites < 1:
            raise DomainError(f"satellites must be >= 1, got {self.satellites}")
        if not self.altitude > 0:
            raise DomainError(f"altitude must be > 0, got {self.altitude}")
        if not self.earth_radius > 0:
            raise DomainError(f"earth_radius must be > 0, got {self.earth_radius}")

    @property
    def shell_radius(self) -> float:
        return self.earth_radius + self.altitude

    @property
    def intensity(self) -> float:
        """Surface density of satellites on the shell (per m^2)."""
        return self.satellites / (4.0 * math.pi * self.shell_radius ** 2)

    @property
    def max_distance(self) -> float:
        return 2.0 * self.earth_radius + self.altitude

    @property
    def _scale(self) -> float:
        # 4 r_e (r_e + r_min); normalizer of the squared-distance law
        return 4.0 * self.earth_radius * self.shell_radius


def _check_nonnegative(r) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise DomainError("distance must be >= 0")
    return arr


def ris_distance_pdf(r, geom: CylinderGeometry):
    """Density of the user-to-RIS distance for a uniformly placed RIS.

    Piecewise in the branch points min(H, R0), max(H, R0) and
    sqrt(R0^2 + H^2); collapses to the flat-disk (or annulus) law
    2r / (R0^2 - c^2) when the region has zero height.
    """
    scalar = np.ndim(r) == 0
    arr = np.atleast_1d(_check_nonnegative(r))
    R0, H, c = geom.base_radius, geom.height, geom.inner_radius
    if H == 0.0:
        out = np.where((arr >= c) & (arr <= R0), 2.0 * arr / (R0 ** 2 - c ** 2), 0.0)
        return float(out[0]) if scalar else out
    lo, hi = min(H, R0), max(H, R0)
    psi3 = geom.max_distance
    out = np.zeros_like(arr)
    core = arr < lo
    out[core] = 2.0 * arr[core] ** 2 / (R0 ** 2 * H)
    mid = (arr >= lo) & (arr < hi)
    if H <= R0:
        out[mid] = 2.0 * arr[mid] / R0 ** 2
    else:
        rm = arr[mid]
        out[mid] = (2.0 * rm / (R0 ** 2 * H)) * (rm - np.sqrt(rm ** 2 - R0 ** 2))
    cap = (arr >= hi) & (arr <= psi3)
    rc = arr[cap]
    out[cap] = (2.0 * rc / R0 ** 2) * (1.0 - np.sqrt(np.maximum(rc ** 2 - R0 ** 2, 0.0)) / H)
    return float(out[0]) if scalar else out


def ris_distance_cdf(r, geom: CylinderGeometry):
    """Distribution function matching ris_distance_pdf; continuous at the
    branch points, 0 at r=0 and 1 at the diagonal of the region."""
    scalar = np.ndim(r) == 0
    arr = np.atleast_1d(_check_nonnegative(r))
    R0, H, c = geom.base_radius, geom.height, geom.inner_radius
    if H == 0.0:
        out = np.clip((arr ** 2 - c ** 2) / (R0 ** 2 - c ** 2), 0.0, 1.0)
        return float(out[0]) if scalar else out
    lo, hi = min(H, R0), max(H, R0)
    psi3 = geom.max_distance
    out = np.ones_like(arr)
    core = arr < lo
    out[core] = 2.0 * arr[core] ** 3 / (3.0 * R0 ** 2 * H)
    mid = (arr >= lo) & (arr < hi)
    if H <= R0:
        out[mid] = arr[mid] ** 2 / R0 ** 2 - H ** 2 / (3.0 * R0 ** 2)
    else:
        rm = arr[mid]
        p2 = np.sqrt(rm ** 2 - R0 ** 2)
        out[mid] = (p2 + 2.0 * rm ** 3 / (3.0 * R0 ** 2)
                    - p2 * (2.0 * rm ** 2 + R0 ** 2) / (3.0 * R0 ** 2)) / H
    cap = (arr >= hi) & (arr < psi3)
    rc = arr[cap]
    p2 = np.sqrt(np.maximum(rc ** 2 - R0 ** 2, 0.0))
    out[cap] = rc ** 2 / R0 ** 2 - H ** 2 / (3.0 * R0 ** 2) - 2.0 * p2 ** 3 / (3.0 * R0 ** 2 * H)
    return float(out[0]) if scalar else out


def _power_integral(a: float, b: float, p: float) -> float:
    """int_a^b r^p dr for 0 < a <= b, continuous through p = -1."""
    if b <= a:
        return 0.0
    y = (p + 1.0) * math.log(b / a)
    phi = math.expm1(y) / y if y != 0.0 else 1.0
    return a ** (p + 1.0) * math.log(b / a) * phi


def _sqrt_weighted_integral(x: float, R0: float, s: float) -> float:
    """int_{R0}^{x} r^{1-s} sqrt(r^2 - R0^2) dr via an Euler-type
    hypergeometric reduction."""
    w = x * x - R0 * R0
    if w <= 0.0:
        return 0.0
    return w ** 1.5 / (3.0 * R0 ** s) * gauss_2f1(s / 2.0, 1.5, 2.5, -w / (R0 * R0))


def ris_distance_moment(t: int, eps: float, geom: CylinderGeometry) -> float:
    """E[R^{-t*eps/2}] of the user-to-RIS distance.

    Assembled from the per-branch antiderivatives of the distance law so
    the removable denominators of the closed-form expression (at
    t*eps = 4 and t*eps = 6) hit their log limits exactly. Divergent
    requests (non-integrable at r=0) raise DivergentMomentError naming
    the exponent.
    """
    if t not in (1, 2):
        raise DomainError(f"moment order t must be 1 or 2, got {t}")
    if eps < 0:
        raise DomainError(f"path-loss exponent must be >= 0, got {eps}")
    R0, H, c = geom.base_radius, geom.height, geom.inner_radius
    s = t * eps / 2.0
    if H == 0.0:
        if c == 0.0:
            if s >= 2.0:
                raise DivergentMomentError(
                    f"moment E[R^-{t * eps / 2:g}] diverges on a flat disk: "
                    f"t*eps = {t * eps:g} >= 4 requires an inner radius"
                )
            return 2.0 * R0 ** (-s) / (2.0 - s)
        return 2.0 * _power_integral(c, R0, 1.0 - s) / (R0 ** 2 - c ** 2)
    if s >= 3.0:
        raise DivergentMomentError(
            f"moment E[R^-{s:g}] diverges for a 3D region: t*eps = {t * eps:g} >= 6"
        )
    lo, hi = min(H, R0), max(H, R0)
    psi3 = geom.max_distance
    total = lo ** (3.0 - s) / ((3.0 - s) * H)
    if H <= R0:
        total += _power_integral(H, R0, 1.0 - s)
        j_mid = 0.0
    else:
        j_mid = _sqrt_weighted_integral(H, R0, s)
        total += (_power_integral(R0, H, 2.0 - s) - j_mid) / H
    total += _power_integral(hi, psi3, 1.0 - s)
    total -= (_sqrt_weighted_integral(psi3, R0, s) - j_mid) / H
    return 2.0 * total / R0 ** 2


def sat_distance_pdf(x, con: Constellation):
    """Density of the user-to-nearest-satellite distance (exponential
    approximation of the min over the shell population)."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    M = con.satellites
    scale = con._scale
    lo, hi = con.altitude, con.max_distance
    inside = (arr >= lo) & (arr <= hi)
    val = np.zeros_like(arr)
    xi = arr[inside]
    val[inside] = (M * xi / (2.0 * con.earth_radius * con.shell_radius)
                   * np.exp(-M * (xi ** 2 - lo ** 2) / scale))
    return float(val[0]) if scalar else val


def sat_distance_cdf(x, con: Constellation):
    """Distribution matching sat_distance_pdf. Its total mass is
    1 - exp(-M); the deficit is the void probability of the approximating
    law and is numerically zero for populated constellations."""
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    lo = con.altitude
    u = np.clip((arr ** 2 - lo ** 2) / con._scale, 0.0, 1.0)
    val = -np.expm1(-con.satellites * u)
    val = np.where(arr < lo, 0.0, val)
    return float(val[0]) if scalar else val


def sat_distance_moment(t: int, eta: float, con: Constellation) -> float:
    """E[R^{-t*eta/2}] of the nearest-satellite distance.

    Evaluated through exponentially scaled generalized exponential
    integrals of order t*eta/4 so the far-edge term (argument ~ M) never
    overflows the unscaled prefactor.
    """
    if t not in (1, 2):
        raise DomainError(f"moment order t must be 1 or 2, got {t}")
    if eta < 0:
        raise DomainError(f"path-loss exponent must be >= 0, got {eta}")
    M = con.satellites
    scale = con._scale
    lo, hi = con.altitude, con.max_distance
    order = t * eta / 4.0
    u1 = M * lo ** 2 / scale
    u2 = M * hi ** 2 / scale
    first = lo ** (2.0 - t * eta / 2.0) * exp_integral_nu(order, u1, scaled=True)
    gap = u2 - u1
    if gap < 700.0:
        second = hi ** (2.0 - t * eta / 2.0) * exp_integral_nu(order, u2, scaled=True) * math.exp(-gap)
    else:
        second = 0.0
    return M / scale * (first - second)


def sample_ris_positions(geom: CylinderGeometry, rng: np.random.Generator,
                         size: int) -> np.ndarray:
    """Uniform RIS positions in the deployment region, shape (size, 3)."""
    u = rng.random(size)
    radial = np.sqrt(geom.inner_radius ** 2
                     + (geom.base_radius ** 2 - geom.inner_radius ** 2) * u)
    angle = 2.0 * math.pi * rng.random(size)
    z = geom.height * rng.random(size) if geom.height > 0 else np.zeros(size)
    return np.column_stack((radial * np.cos(angle), radial * np.sin(angle), z))


def sample_ris_position(geom: CylinderGeometry, rng: np.random.Generator) -> Point3D:
    """One uniform RIS position."""
    pos = sample_ris_positions(geom, rng, 1)[0]
    return Point3D(float(pos[0]), float(pos[1]), float(pos[2]))


def sample_ris_distances(geom: CylinderGeometry, rng: np.random.Generator,
                         size: int) -> np.ndarray:
    """User-to-RIS distances for freshly drawn positions.

    Draws radial and height coordinates only; the azimuth does not enter
    the distance.
    """
    u = rng.random(size)
    radial = np.sqrt(geom.inner_radius ** 2
                     + (geom.base_radius ** 2 - geom.inner_radius ** 2) * u)
    if geom.height == 0.0:
        return radial
    return np.hypot(radial, geom.height * rng.random(size))


def sample_nearest_sat_distance(con: Constellation, rng: np.random.Generator,
                                size: int | None = None):
    """Distance to the nearest of ``satellites`` points placed uniformly
    on the shell.

    Uses the order statistic directly: each satellite's squared distance
    is uniform on the slant-range interval, so the minimum over M of them
    is a Beta(1, M) draw mapped back through the distance law. This is
    distribution-exact and O(1) per sample; sample_constellation provides
    the materialized-points path for cross-checks.
    """
    n = 1 if size is None else int(size)
    v = rng.random(n)
    # min of M iid U(0,1) = 1 - V^(1/M), computed stably for large M
    umin = -np.expm1(np.log1p(-v) / con.satellites)
    d = np.sqrt(con.altitude ** 2 + con._scale * umin)
    return float(d[0]) if size is None else d


def sample_constellation(con: Constellation, rng: np.random.Generator) -> np.ndarray:
    """All satellite positions of one constellation draw, shape (M, 3),
    in the user-centered frame."""
    m = con.satellites
    cos_polar = 1.0 - 2.0 * rng.random(m)
    sin_polar = np.sqrt(np.maximum(1.0 - cos_polar ** 2, 0.0))
    azimuth = 2.0 * math.pi * rng.random(m)
    R = con.shell_radius
    pos = np.column_stack((R * sin_polar * np.cos(azimuth),
                           R * sin_polar * np.sin(azimuth),
                           R * cos_polar - con.earth_radius))
    return pos
