"""Point-process samplers: counts, supports, and uniformity checks."""

import math

import numpy as np
import pytest
from scipy import stats

from ntnsim.channel import DEFAULT_HAP_RADIO, DEFAULT_LAP_RADIO
from ntnsim.geom import EARTH_RADIUS_KM, SphericalCap, central_angle, GeoPoint
from ntnsim.pointproc import (
    Constellation,
    OrbitPlane,
    Tier,
    concat,
    sample_bpp_cap,
    sample_bpp_sphere,
    sample_cap_point,
    sample_cox_orbits,
    sample_disk_point,
    sample_orbit_model,
    sample_ppp_cap,
    sample_ppp_disk,
)
from ntnsim.rng import trial_rng

Z = np.array([0.0, 0.0, 1.0])


def test_bpp_sphere_count_and_radius():
    cons = sample_bpp_sphere(40, 6921.0, trial_rng(1, "t", 0))
    assert len(cons) == 40
    np.testing.assert_allclose(cons.radii, 6921.0, rtol=1e-12)
    assert set(cons.tiers) == {int(Tier.SAT)}


def test_bpp_sphere_zero_and_negative():
    assert len(sample_bpp_sphere(0, 6921.0, trial_rng(1, "t", 0))) == 0
    with pytest.raises(ValueError):
        sample_bpp_sphere(-1, 6921.0, trial_rng(1, "t", 0))


def test_bpp_sphere_z_uniform_ks():
    # z/r of uniform-on-sphere points is uniform on [-1, 1].
    cons = sample_bpp_sphere(50_000, 1.0, trial_rng(2, "t", 0))
    z = cons.positions[:, 2]
    assert stats.kstest(z, stats.uniform(loc=-1.0, scale=2.0).cdf).pvalue > 0.01


def test_bpp_cap_support():
    cap = SphericalCap(np.array([1.0, 1.0, 0.0]), math.pi / 5.0, 6391.0)
    cons = sample_bpp_cap(500, cap, trial_rng(3, "t", 0))
    np.testing.assert_allclose(cons.radii, 6391.0, rtol=1e-12)
    center = GeoPoint(6391.0, cap.center)
    for p in cons.positions:
        ang = central_angle(center, GeoPoint.from_vector(p))
        assert ang <= cap.apex_angle / 2.0 + 1e-12


def test_bpp_cap_polar_distribution():
    cap = SphericalCap(Z, math.pi / 2.0, 1.0)
    cons = sample_bpp_cap(50_000, cap, trial_rng(4, "t", 0))
    cos_half = math.cos(cap.apex_angle / 2.0)
    u = (1.0 - cons.positions[:, 2]) / (1.0 - cos_half)
    assert stats.kstest(u, "uniform").pvalue > 0.01


def test_ppp_cap_mean_count():
    cap = SphericalCap(Z, math.pi / 45.0, EARTH_RADIUS_KM)
    density = 1.0 / 1000.0
    expected = density * cap.area_km2
    counts = [
        len(sample_ppp_cap(density, cap, trial_rng(5, "t", i))) for i in range(400)
    ]
    mean = np.mean(counts)
    assert mean == pytest.approx(expected, rel=4.0 / math.sqrt(expected * 400))


def test_ppp_cap_fano_factor():
    # Poisson counts: variance / mean close to 1.
    cap = SphericalCap(Z, math.pi / 3.0, 100.0)
    density = 0.02
    counts = np.array(
        [len(sample_ppp_cap(density, cap, trial_rng(6, "fano", i))) for i in range(1000)]
    )
    fano = counts.var(ddof=1) / counts.mean()
    assert 0.95 <= fano <= 1.05


def test_ppp_disk_support_and_fixed_count():
    rng = trial_rng(7, "t", 0)
    cons = sample_ppp_disk(0.0, 30.0, 80.0, rng, n=200)
    assert len(cons) == 200
    base = (EARTH_RADIUS_KM + 0.08) * Z
    lateral = cons.positions - base
    np.testing.assert_allclose(lateral[:, 2], 0.0, atol=1e-9)
    assert np.all(np.linalg.norm(lateral[:, :2], axis=1) <= 30.0 + 1e-9)
    assert set(cons.tiers) == {int(Tier.LAP)}


def test_ppp_disk_poisson_count():
    density, radius = 0.05, 30.0
    expected = density * math.pi * radius**2
    counts = [
        len(sample_ppp_disk(density, radius, 80.0, trial_rng(8, "t", i)))
        for i in range(400)
    ]
    assert np.mean(counts) == pytest.approx(expected, rel=4.0 / math.sqrt(expected * 400))


def test_disk_point_support():
    for i in range(50):
        p = sample_disk_point(30.0, trial_rng(9, "t", i))
        lateral = p.position - EARTH_RADIUS_KM * Z
        assert abs(lateral[2]) < 1e-9
        assert np.linalg.norm(lateral[:2]) <= 30.0 + 1e-9


def test_cap_point_support():
    cap = SphericalCap(Z, math.pi / 45.0, EARTH_RADIUS_KM)
    center = GeoPoint(EARTH_RADIUS_KM, Z)
    for i in range(50):
        p = sample_cap_point(cap, trial_rng(10, "t", i))
        assert p.radius == pytest.approx(EARTH_RADIUS_KM)
        assert central_angle(center, p) <= cap.apex_angle / 2.0 + 1e-12


def test_orbit_plane_positions_on_circle():
    plane = OrbitPlane(math.radians(53.0), 1.0, 6921.0)
    u = np.linspace(0.0, 2.0 * math.pi, 100)
    pos = plane.positions(u)
    np.testing.assert_allclose(np.linalg.norm(pos, axis=1), 6921.0, rtol=1e-12)
    # All positions lie in one plane: constant normal direction.
    normal = np.cross(pos[0], pos[25])
    normal /= np.linalg.norm(normal)
    np.testing.assert_allclose(pos @ normal, 0.0, atol=1e-6)
    # Inclination shows up as max |z| = r * sin(i).
    assert np.max(np.abs(pos[:, 2])) == pytest.approx(
        6921.0 * math.sin(math.radians(53.0)), rel=1e-3
    )


def test_orbit_plane_validation():
    with pytest.raises(ValueError):
        OrbitPlane(-0.1, 0.0, 6921.0)
    with pytest.raises(ValueError):
        OrbitPlane(1.0, 7.0, 6921.0)
    with pytest.raises(ValueError):
        OrbitPlane(1.0, 0.0, -1.0)


def test_cox_orbits_altitude_validation():
    rng = trial_rng(11, "t", 0)
    with pytest.raises(ValueError):
        sample_cox_orbits(5.0, 10.0, (100.0, 500.0), rng)
    with pytest.raises(ValueError):
        sample_cox_orbits(5.0, 10.0, (500.0, 2500.0), rng)
    planes, cons = sample_cox_orbits(5.0, 10.0, (500.0, 600.0), rng)
    for plane in planes:
        assert EARTH_RADIUS_KM + 500.0 <= plane.radius <= EARTH_RADIUS_KM + 600.0
    if len(cons):
        radii = cons.radii
        assert radii.min() >= EARTH_RADIUS_KM + 500.0 - 1e-9
        assert radii.max() <= EARTH_RADIUS_KM + 600.0 + 1e-9


def test_cox_orbits_mean_count():
    total = 0
    n_runs = 300
    for i in range(n_runs):
        _, cons = sample_cox_orbits(4.0, 5.0, (500.0, 600.0), trial_rng(12, "t", i))
        total += len(cons)
    assert total / n_runs == pytest.approx(20.0, rel=0.1)


def test_orbit_model_counts():
    planes = [OrbitPlane(1.0, 0.0, 6921.0), OrbitPlane(1.0, 2.0, 6921.0)]
    cons = sample_orbit_model(planes, 7, trial_rng(13, "t", 0))
    assert len(cons) == 14
    with pytest.raises(ValueError):
        sample_orbit_model([], 7, trial_rng(13, "t", 0))


def test_constellation_concat_and_platforms():
    rng = trial_rng(14, "t", 0)
    a = sample_bpp_sphere(3, 6921.0, rng)
    b = sample_bpp_cap(2, SphericalCap(Z, 0.3, 6391.0), rng, radio=DEFAULT_HAP_RADIO)
    c = concat([a, b])
    assert len(c) == 5
    assert [p.id for p in c] == [0, 1, 2, 3, 4]
    assert c.platform(3).tier == Tier.HAP
    np.testing.assert_array_equal(c.positions[:3], a.positions)


def test_constellation_empty():
    e = Constellation.empty()
    assert len(e) == 0
    assert concat([]).positions.shape == (0, 3)


def test_constellation_cached_arrays():
    cons = sample_ppp_disk(0.0, 30.0, 80.0, trial_rng(15, "t", 0), n=4, radio=DEFAULT_LAP_RADIO)
    assert cons.power_const_db.shape == (4,)
    np.testing.assert_allclose(cons.bandwidth_hz, DEFAULT_LAP_RADIO.bandwidth_hz)


def test_samplers_deterministic():
    a = sample_bpp_sphere(10, 6921.0, trial_rng(16, "d", 3)).positions
    b = sample_bpp_sphere(10, 6921.0, trial_rng(16, "d", 3)).positions
    np.testing.assert_array_equal(a, b)
