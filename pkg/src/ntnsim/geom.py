"""Exact spherical geometry: ranges, horizon visibility, cap areas, session arcs.

Distances are in kilometres, angles in radians.  The Earth is a perfect
sphere of radius 6371 km and acts as the only blocking body: a link exists
iff the straight segment between the endpoints does not pass strictly
inside that sphere.  All types are immutable and all functions pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_KM = 6371.0
MU_EARTH_KM3_S2 = 398600.4418
SPEED_OF_LIGHT_KM_S = 299792.458


def _unit(v) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {arr.shape}")
    n = float(np.linalg.norm(arr))
    if not math.isfinite(n) or n == 0.0:
        raise ValueError("direction must be finite and nonzero")
    arr /= n
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GeoPoint:
    """Position in Earth-centered coordinates: radius plus unit direction."""

    radius: float
    direction: np.ndarray

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        object.__setattr__(self, "direction", _unit(self.direction))

    @property
    def position(self) -> np.ndarray:
        """Cartesian position vector in km."""
        return self.radius * self.direction

    @classmethod
    def from_vector(cls, xyz) -> "GeoPoint":
        arr = np.asarray(xyz, dtype=float)
        return cls(float(np.linalg.norm(arr)), arr)

    @classmethod
    def from_polar(cls, radius: float, colatitude: float, azimuth: float = 0.0) -> "GeoPoint":
        s = math.sin(colatitude)
        return cls(radius, np.array([s * math.cos(azimuth), s * math.sin(azimuth), math.cos(colatitude)]))


@dataclass(frozen=True, eq=False)
class SphericalCap:
    """Cap cut from a sphere by a cone of full apex angle `apex_angle`.

    The polar half-angle of the cap is apex_angle / 2.
    """

    center: np.ndarray
    apex_angle: float
    sphere_radius: float

    def __post_init__(self):
        if not 0.0 <= self.apex_angle <= 2.0 * math.pi:
            raise ValueError(f"apex_angle must be in [0, 2*pi], got {self.apex_angle}")
        if not self.sphere_radius > 0.0:
            raise ValueError(f"sphere_radius must be positive, got {self.sphere_radius}")
        object.__setattr__(self, "center", _unit(self.center))

    @property
    def area_km2(self) -> float:
        return cap_area(self)


def cap_area(cap: SphericalCap) -> float:
    """Surface area of a spherical cap in km^2."""
    return 2.0 * math.pi * cap.sphere_radius**2 * (1.0 - math.cos(cap.apex_angle / 2.0))


def central_angle(p: GeoPoint, q: GeoPoint) -> float:
    """Angle between the two direction vectors, in [0, pi].

    Uses atan2 of cross/dot, which stays accurate near 0 and pi where
    acos of the dot product loses precision.
    """
    cross = np.cross(p.direction, q.direction)
    return math.atan2(float(np.linalg.norm(cross)), float(np.dot(p.direction, q.direction)))


def slant_range(user: GeoPoint, platform: GeoPoint) -> float:
    """Straight-line distance between the two points in km."""
    phi = central_angle(user, platform)
    ru, rp = user.radius, platform.radius
    return math.sqrt(max(ru * ru + rp * rp - 2.0 * ru * rp * math.cos(phi), 0.0))


def max_visibility_angle(r_low: float, r_high: float) -> float:
    """Largest central angle at which a point at r_high clears the horizon
    of a point sitting on the sphere of radius r_low."""
    if not r_low > 0.0:
        raise ValueError(f"r_low must be positive, got {r_low}")
    if r_high < r_low:
        raise ValueError(f"r_high ({r_high}) must be >= r_low ({r_low})")
    return math.acos(r_low / r_high)


def horizon_angle(radius: float, blocking_radius: float = EARTH_RADIUS_KM) -> float:
    """Half-angle of the horizon cone for a point at `radius` above a
    blocking sphere.  Zero for a point on the blocking sphere itself."""
    if radius < blocking_radius:
        # Tolerate tiny numerical dips below the surface.
        if radius > blocking_radius * (1.0 - 1e-12):
            return 0.0
        raise ValueError(f"point radius {radius} is inside blocking sphere {blocking_radius}")
    return math.acos(blocking_radius / radius)


def is_visible(observer: GeoPoint, platform: GeoPoint) -> bool:
    """True iff the segment between the points clears the Earth sphere.

    Equivalent to central_angle <= horizon(observer) + horizon(platform);
    for an observer on the surface this reduces to
    central_angle <= max_visibility_angle(observer.radius, platform.radius).
    Boundary cases (grazing segments) count as visible.
    """
    limit = horizon_angle(observer.radius) + horizon_angle(platform.radius)
    return central_angle(observer, platform) <= min(limit, math.pi)


def in_common_los(platform: GeoPoint, a: GeoPoint, b: GeoPoint) -> bool:
    """True iff the platform is above the horizon of both endpoints."""
    return is_visible(a, platform) and is_visible(b, platform)


def session_arc_half_angle(orbit_radius: float, user_radius: float, plane_offset: float) -> float:
    """Half-angle of the orbit arc over which a satellite is visible.

    `plane_offset` is the angular distance from the user to the orbit
    plane's great circle.  Session arc length is 2 * alpha * orbit_radius.
    Returns 0 when the pass never rises above the horizon.
    """
    if orbit_radius <= user_radius:
        raise ValueError(f"orbit_radius ({orbit_radius}) must exceed user_radius ({user_radius})")
    if not 0.0 <= plane_offset <= math.pi / 2.0:
        raise ValueError(f"plane_offset must be in [0, pi/2], got {plane_offset}")
    phi_max = max_visibility_angle(user_radius, orbit_radius)
    if plane_offset >= phi_max:
        return 0.0
    # Spherical right-triangle identity: cos(phi) = cos(offset) * cos(u).
    return math.acos(min(math.cos(phi_max) / math.cos(plane_offset), 1.0))


# Vectorized helpers used by the Monte-Carlo runners.  Positions are
# (n, 3) arrays of absolute Cartesian coordinates in km.


def visible_mask(observer: GeoPoint, positions: np.ndarray) -> np.ndarray:
    """Boolean mask of positions visible from `observer` (Earth-blocked)."""
    positions = np.asarray(positions, dtype=float)
    if positions.size == 0:
        return np.zeros(0, dtype=bool)
    radii = np.linalg.norm(positions, axis=1)
    cos_phi = positions @ observer.direction / radii
    limit = horizon_angle(observer.radius) + np.arccos(
        np.clip(EARTH_RADIUS_KM / radii, -1.0, 1.0)
    )
    return np.arccos(np.clip(cos_phi, -1.0, 1.0)) <= np.minimum(limit, math.pi)


def common_los_mask(positions: np.ndarray, a: GeoPoint, b: GeoPoint) -> np.ndarray:
    """Mask of positions simultaneously visible from both `a` and `b`."""
    return visible_mask(a, positions) & visible_mask(b, positions)


def rotation_to(target: np.ndarray) -> np.ndarray:
    """Rotation matrix taking the +z axis onto the unit vector `target`."""
    z = np.array([0.0, 0.0, 1.0])
    t = _unit(target)
    c = float(np.dot(z, t))
    if c > 1.0 - 1e-15:
        return np.eye(3)
    if c < -1.0 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    v = np.cross(z, t)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)
