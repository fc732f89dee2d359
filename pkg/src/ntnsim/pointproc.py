"""Seeded samplers for the platform and user point processes.

Samplers are pure given an explicit numpy Generator.  Constellations are
array-backed so a 1000-platform realization costs two numpy arrays, with a
per-platform object view available on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Optional, Sequence

import numpy as np

from .channel import (
    DEFAULT_HAP_RADIO,
    DEFAULT_LAP_RADIO,
    DEFAULT_SAT_RADIO,
    RadioParams,
    link_budget_const_db,
)
from .geom import EARTH_RADIUS_KM, GeoPoint, SphericalCap, cap_area, rotation_to


class Tier(IntEnum):
    LAP = 0
    HAP = 1
    SAT = 2


DEFAULT_RADIOS = {
    Tier.LAP: DEFAULT_LAP_RADIO,
    Tier.HAP: DEFAULT_HAP_RADIO,
    Tier.SAT: DEFAULT_SAT_RADIO,
}


@dataclass(frozen=True)
class Platform:
    id: int
    tier: Tier
    position: GeoPoint
    radio: RadioParams


@dataclass(frozen=True, eq=False)
class Constellation:
    """One sampled realization: positions (n, 3) in km plus per-platform
    tier codes and radio parameters.  Platform ids are the row indices."""

    positions: np.ndarray
    tiers: np.ndarray
    radios: tuple[RadioParams, ...]
    power_const_db: np.ndarray = field(default=None)  # type: ignore[assignment]
    bandwidth_hz: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        tiers = np.asarray(self.tiers, dtype=np.int8).reshape(-1)
        if len(pos) != len(tiers) or len(pos) != len(self.radios):
            raise ValueError("positions, tiers and radios must have equal length")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "tiers", tiers)
        if self.power_const_db is None:
            consts = {}
            vals = np.empty(len(pos))
            for i, radio in enumerate(self.radios):
                key = id(radio)
                if key not in consts:
                    consts[key] = link_budget_const_db(radio)
                vals[i] = consts[key]
            object.__setattr__(self, "power_const_db", vals)
        if self.bandwidth_hz is None:
            object.__setattr__(
                self, "bandwidth_hz", np.array([r.bandwidth_hz for r in self.radios])
            )

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.positions, axis=1)

    def platform(self, i: int) -> Platform:
        return Platform(i, Tier(int(self.tiers[i])), GeoPoint.from_vector(self.positions[i]), self.radios[i])

    def __iter__(self) -> Iterator[Platform]:
        return (self.platform(i) for i in range(len(self)))

    @staticmethod
    def empty() -> "Constellation":
        return Constellation(np.zeros((0, 3)), np.zeros(0, dtype=np.int8), (), np.zeros(0), np.zeros(0))


def concat(parts: Sequence[Constellation]) -> Constellation:
    """Merge constellations; ids are renumbered to the concatenated order."""
    if not parts:
        return Constellation.empty()
    return Constellation(
        np.concatenate([p.positions for p in parts]),
        np.concatenate([p.tiers for p in parts]),
        tuple(r for p in parts for r in p.radios),
        np.concatenate([p.power_const_db for p in parts]),
        np.concatenate([p.bandwidth_hz for p in parts]),
    )


def _make(positions: np.ndarray, tier: Tier, radio: RadioParams) -> Constellation:
    n = len(positions)
    return Constellation(
        positions,
        np.full(n, int(tier), dtype=np.int8),
        (radio,) * n,
        np.full(n, link_budget_const_db(radio)),
        np.full(n, radio.bandwidth_hz),
    )


def _uniform_sphere_dirs(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    # A zero norm has probability zero; guard against it anyway.
    norms[norms == 0.0] = 1.0
    return v / norms


def _uniform_cap_dirs(n: int, cap: SphericalCap, rng: np.random.Generator) -> np.ndarray:
    # Uniform on the cap around +z: azimuth uniform, cos(polar) uniform on
    # [cos(apex/2), 1]; then rotate +z onto the cap center.
    cos_half = math.cos(cap.apex_angle / 2.0)
    cos_theta = 1.0 - rng.uniform(size=n) * (1.0 - cos_half)
    sin_theta = np.sqrt(np.clip(1.0 - cos_theta**2, 0.0, None))
    az = rng.uniform(0.0, 2.0 * math.pi, size=n)
    dirs = np.column_stack([sin_theta * np.cos(az), sin_theta * np.sin(az), cos_theta])
    return dirs @ rotation_to(cap.center).T


def sample_bpp_sphere(
    n: int,
    radius: float,
    rng: np.random.Generator,
    *,
    tier: Tier = Tier.SAT,
    radio: Optional[RadioParams] = None,
) -> Constellation:
    """Exactly n points, independent and uniform on the sphere."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    radio = radio or DEFAULT_RADIOS[tier]
    return _make(radius * _uniform_sphere_dirs(n, rng), tier, radio)


def sample_bpp_cap(
    n: int,
    cap: SphericalCap,
    rng: np.random.Generator,
    *,
    tier: Tier = Tier.HAP,
    radio: Optional[RadioParams] = None,
) -> Constellation:
    """Exactly n points, independent and uniform on the spherical cap."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    radio = radio or DEFAULT_RADIOS[tier]
    return _make(cap.sphere_radius * _uniform_cap_dirs(n, cap, rng), tier, radio)


def sample_ppp_cap(
    density: float,
    cap: SphericalCap,
    rng: np.random.Generator,
    *,
    tier: Tier = Tier.HAP,
    radio: Optional[RadioParams] = None,
) -> Constellation:
    """Poisson(density * area) points uniform on the cap; density in /km^2."""
    if density < 0:
        raise ValueError(f"density must be >= 0, got {density}")
    n = int(rng.poisson(density * cap_area(cap)))
    return sample_bpp_cap(n, cap, rng, tier=tier, radio=radio)


def sample_ppp_disk(
    density: float,
    disk_radius: float,
    altitude_m: float,
    rng: np.random.Generator,
    *,
    n: Optional[int] = None,
    center: Optional[np.ndarray] = None,
    tier: Tier = Tier.LAP,
    radio: Optional[RadioParams] = None,
) -> Constellation:
    """Planar point process on a disk of `disk_radius` km, laid on the local
    tangent plane at a surface reference point and lifted `altitude_m` up.

    With `n` given the count is fixed (BPP variant), otherwise it is drawn
    Poisson(density * pi * disk_radius^2).
    """
    if density < 0:
        raise ValueError(f"density must be >= 0, got {density}")
    if n is None:
        n = int(rng.poisson(density * math.pi * disk_radius**2))
    elif n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    c = np.array([0.0, 0.0, 1.0]) if center is None else np.asarray(center, dtype=float)
    c = c / np.linalg.norm(c)
    rot = rotation_to(c)
    e1, e2 = rot[:, 0], rot[:, 1]
    r = disk_radius * np.sqrt(rng.uniform(size=n))
    az = rng.uniform(0.0, 2.0 * math.pi, size=n)
    base = (EARTH_RADIUS_KM + altitude_m / 1000.0) * c
    positions = base + np.outer(r * np.cos(az), e1) + np.outer(r * np.sin(az), e2)
    radio = radio or DEFAULT_RADIOS[tier]
    return _make(positions, tier, radio)


@dataclass(frozen=True)
class OrbitPlane:
    """Circular orbit plane: inclination, right ascension of the ascending
    node, and orbit radius from the Earth center."""

    inclination: float
    ascending_node: float
    radius: float

    def __post_init__(self):
        if not 0.0 <= self.inclination <= math.pi:
            raise ValueError(f"inclination must be in [0, pi], got {self.inclination}")
        if not 0.0 <= self.ascending_node < 2.0 * math.pi:
            raise ValueError(f"ascending_node must be in [0, 2*pi), got {self.ascending_node}")
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def position(self, arg_latitude: float) -> np.ndarray:
        """Satellite position at the given argument of latitude, in km."""
        return self.positions(np.asarray([arg_latitude]))[0]

    def positions(self, arg_latitudes: np.ndarray) -> np.ndarray:
        u = np.asarray(arg_latitudes, dtype=float)
        cu, su = np.cos(u), np.sin(u)
        ci, si = math.cos(self.inclination), math.sin(self.inclination)
        co, so = math.cos(self.ascending_node), math.sin(self.ascending_node)
        x = co * cu - so * su * ci
        y = so * cu + co * su * ci
        z = su * si
        return self.radius * np.column_stack([x, y, z])


LEO_ALTITUDE_RANGE_KM = (160.0, 2000.0)


def sample_cox_orbits(
    orbit_rate: float,
    sats_per_orbit_mean: float,
    altitude_range: tuple[float, float],
    rng: np.random.Generator,
    *,
    radio: Optional[RadioParams] = None,
) -> tuple[list[OrbitPlane], Constellation]:
    """Cox process: Poisson orbit planes drawn uniformly over the
    (ascending node, inclination, altitude) cuboid, each carrying a Poisson
    number of satellites uniform in argument of latitude."""
    if orbit_rate < 0 or sats_per_orbit_mean < 0:
        raise ValueError("rates must be >= 0")
    lo, hi = altitude_range
    if not (LEO_ALTITUDE_RANGE_KM[0] <= lo <= hi <= LEO_ALTITUDE_RANGE_KM[1]):
        raise ValueError(f"altitude_range {altitude_range} must lie within {LEO_ALTITUDE_RANGE_KM} km")
    radio = radio or DEFAULT_SAT_RADIO
    n_planes = int(rng.poisson(orbit_rate))
    planes = []
    blocks = []
    for _ in range(n_planes):
        node = float(rng.uniform(0.0, 2.0 * math.pi))
        incl = float(rng.uniform(0.0, math.pi))
        alt = float(rng.uniform(lo, hi))
        plane = OrbitPlane(incl, node, EARTH_RADIUS_KM + alt)
        planes.append(plane)
        m = int(rng.poisson(sats_per_orbit_mean))
        if m:
            blocks.append(plane.positions(rng.uniform(0.0, 2.0 * math.pi, size=m)))
    positions = np.concatenate(blocks) if blocks else np.zeros((0, 3))
    return planes, _make(positions, Tier.SAT, radio)


def sample_orbit_model(
    planes: Sequence[OrbitPlane],
    sats_per_plane: int,
    rng: np.random.Generator,
    *,
    radio: Optional[RadioParams] = None,
) -> Constellation:
    """Semi-stochastic orbit model: deterministic planes, satellites placed
    independently uniformly in argument of latitude on each plane."""
    if not planes:
        raise ValueError("planes must be nonempty")
    if sats_per_plane < 0:
        raise ValueError(f"sats_per_plane must be >= 0, got {sats_per_plane}")
    radio = radio or DEFAULT_SAT_RADIO
    if sats_per_plane == 0:
        return _make(np.zeros((0, 3)), Tier.SAT, radio)
    blocks = [p.positions(rng.uniform(0.0, 2.0 * math.pi, size=sats_per_plane)) for p in planes]
    return _make(np.concatenate(blocks), Tier.SAT, radio)


def sample_cap_point(cap: SphericalCap, rng: np.random.Generator) -> GeoPoint:
    """One point uniform on the cap (e.g. the reference user of a trial)."""
    return GeoPoint.from_vector(cap.sphere_radius * _uniform_cap_dirs(1, cap, rng)[0])


def sample_disk_point(
    disk_radius: float,
    rng: np.random.Generator,
    *,
    altitude_m: float = 0.0,
    center: Optional[np.ndarray] = None,
) -> GeoPoint:
    """One point uniform on the tangent-plane disk."""
    c = np.array([0.0, 0.0, 1.0]) if center is None else np.asarray(center, dtype=float)
    c = c / np.linalg.norm(c)
    rot = rotation_to(c)
    r = disk_radius * math.sqrt(rng.uniform())
    az = rng.uniform(0.0, 2.0 * math.pi)
    pos = (EARTH_RADIUS_KM + altitude_m / 1000.0) * c + r * math.cos(az) * rot[:, 0] + r * math.sin(az) * rot[:, 1]
    return GeoPoint.from_vector(pos)
