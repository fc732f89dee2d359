"""Monte-Carlo estimators and analytic cross-checks for system-level metrics.

Every estimator derives per-trial randomness from (seed, stream label,
trial index), so estimates are bit-identical regardless of how trials are
scheduled.  Probabilities carry 95% Wilson intervals; means carry
normal-approximation intervals computed with compensated summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import channel, geom
from .channel import NoiseSpec, noise_power_dbw, sample_fading
from .geom import GeoPoint, MU_EARTH_KM3_S2, SPEED_OF_LIGHT_KM_S
from .pointproc import Constellation
from .rng import trial_rng

Z95 = 1.959963984540054


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    ci_low: float
    ci_high: float
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.ci_low <= self.value <= self.ci_high:
            raise ValueError(
                f"interval [{self.ci_low}, {self.ci_high}] must contain value {self.value}"
            )

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0


@dataclass(frozen=True)
class LapDutyCycle:
    """Serving / back-haul / charging durations of one LAP cycle, seconds."""

    serving: float
    backhaul: float
    charging: float

    def __post_init__(self):
        if min(self.serving, self.backhaul, self.charging) < 0:
            raise ValueError("durations must be nonnegative")
        if self.serving + self.backhaul + self.charging == 0:
            raise ValueError("durations must not all be zero")


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(center - half, 0.0)
    hi = 1.0 if successes == trials else min(center + half, 1.0)
    return lo, hi


def probability_estimate(successes: int, trials: int) -> MetricEstimate:
    lo, hi = wilson_interval(successes, trials)
    return MetricEstimate(successes / trials, lo, hi, trials)


def mean_estimate(values: Sequence[float]) -> MetricEstimate:
    """Sample mean with a normal-approximation 95% CI (compensated sums)."""
    n = len(values)
    if n < 2:
        raise ValueError("need at least 2 values for a mean estimate")
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    half = Z95 * math.sqrt(var / n)
    return MetricEstimate(mean, mean - half, mean + half, n)


def estimate_mean(
    sampler: Callable[[np.random.Generator], float],
    trials: int,
    seed: int,
    *,
    label: str = "estimate_mean",
) -> MetricEstimate:
    """Run `sampler` once per trial; Wilson interval if all values are 0/1."""
    if trials < 2:
        raise ValueError(f"trials must be >= 2, got {trials}")
    values = [float(sampler(trial_rng(seed, label, i))) for i in range(trials)]
    if all(v in (0.0, 1.0) for v in values):
        return probability_estimate(int(sum(values)), trials)
    return mean_estimate(values)


# --- association and per-trial link evaluation -------------------------------


def associate(user: GeoPoint, constellation: Constellation) -> Optional[int]:
    """Id of the visible platform with the strongest fading-free received
    power, or None when nothing is visible.  Ties go to the lowest id."""
    if len(constellation) == 0:
        return None
    mask = geom.visible_mask(user, constellation.positions)
    if not mask.any():
        return None
    idx = np.flatnonzero(mask)
    d = np.linalg.norm(constellation.positions[idx] - user.position, axis=1)
    power = constellation.power_const_db[idx] - 20.0 * np.log10(np.maximum(d, 1e-12))
    return int(idx[np.argmax(power)])


def draw_fading(constellation: Constellation, indices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Fading gains for the given platforms, grouped by fading spec so the
    draws vectorize; group order follows first occurrence, which keeps the
    consumed random stream deterministic."""
    indices = np.asarray(indices, dtype=int)
    gains = np.empty(len(indices))
    groups: dict[int, list[int]] = {}
    specs = {}
    for j, i in enumerate(indices):
        spec = constellation.radios[i].fading
        key = id(spec)
        groups.setdefault(key, []).append(j)
        specs[key] = spec
    for key, js in groups.items():
        gains[js] = np.asarray(sample_fading(specs[key], rng, size=len(js))).reshape(-1)
    return gains


Resolvable = Union[GeoPoint, Constellation, Callable]


def _resolve(obj, rng):
    return obj(rng) if callable(obj) else obj


@dataclass(frozen=True)
class CoverageSetup:
    """Inputs for coverage-style estimators: either fixed objects or
    samplers called once per trial with that trial's generator."""

    constellation: Resolvable
    user: Resolvable
    noise: NoiseSpec = NoiseSpec()
    mode: str = "snr"

    def __post_init__(self):
        if self.mode not in ("snr", "sinr"):
            raise ValueError(f"mode must be 'snr' or 'sinr', got {self.mode!r}")


def _snr_samples(
    user: GeoPoint, constellation: Constellation, indices: np.ndarray,
    gains: np.ndarray, noise: NoiseSpec,
) -> np.ndarray:
    d = np.linalg.norm(constellation.positions[indices] - user.position, axis=1)
    noise_dbw = noise.psd_dbm_hz + 10.0 * np.log10(constellation.bandwidth_hz[indices]) - 30.0
    with np.errstate(divide="ignore"):
        return (
            constellation.power_const_db[indices]
            - 20.0 * np.log10(np.maximum(d, 1e-12))
            + 10.0 * np.log10(gains)
            - noise_dbw
        )


def coverage_probability(
    setup: CoverageSetup, threshold_db: float, trials: int, seed: int
) -> MetricEstimate:
    """Probability that the serving link's SNR (or SINR) beats the threshold,
    with a fresh user, constellation and fading realization each trial."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    successes = 0
    for t in range(trials):
        rng = trial_rng(seed, "coverage", t)
        user = _resolve(setup.user, rng)
        cons = _resolve(setup.constellation, rng)
        mask = geom.visible_mask(user, cons.positions) if len(cons) else np.zeros(0, bool)
        if not mask.any():
            continue
        idx = np.flatnonzero(mask)
        gains = draw_fading(cons, idx, rng)
        snrs = _snr_samples(user, cons, idx, gains, setup.noise)
        d = np.linalg.norm(cons.positions[idx] - user.position, axis=1)
        mean_power = cons.power_const_db[idx] - 20.0 * np.log10(np.maximum(d, 1e-12))
        serving = int(np.argmax(mean_power))
        value = snrs[serving]
        if setup.mode == "sinr":
            signal_w = 10.0 ** (
                (mean_power[serving] + 10.0 * np.log10(max(gains[serving], 1e-300))) / 10.0
            )
            interf_w = float(
                np.sum(np.delete(10.0 ** ((mean_power + 10.0 * np.log10(np.maximum(gains, 1e-300))) / 10.0), serving))
            )
            noise_w = 10.0 ** (
                noise_power_dbw(setup.noise, cons.radios[idx[serving]].bandwidth_hz) / 10.0
            )
            value = 10.0 * math.log10(signal_w / (noise_w + interf_w))
        if value >= threshold_db:
            successes += 1
    return probability_estimate(successes, trials)


def k_coverage_probability(
    setup: CoverageSetup, k: int, threshold_db: float, trials: int, seed: int
) -> MetricEstimate:
    """Probability that at least k visible platforms individually beat the
    SNR threshold, with independent fading per platform."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    successes = 0
    for t in range(trials):
        rng = trial_rng(seed, "coverage", t)
        user = _resolve(setup.user, rng)
        cons = _resolve(setup.constellation, rng)
        mask = geom.visible_mask(user, cons.positions) if len(cons) else np.zeros(0, bool)
        if int(mask.sum()) < k:
            continue
        idx = np.flatnonzero(mask)
        gains = draw_fading(cons, idx, rng)
        snrs = _snr_samples(user, cons, idx, gains, setup.noise)
        if int(np.sum(snrs >= threshold_db)) >= k:
            successes += 1
    return probability_estimate(successes, trials)


@dataclass(frozen=True)
class RelaySetup:
    """Inputs for relay availability: user process, fixed base station, and
    the pooled relay constellation (HAPs plus satellites)."""

    platforms: Resolvable
    user: Resolvable
    base_station: GeoPoint


def relay_availability(setup: RelaySetup, trials: int, seed: int) -> MetricEstimate:
    """Fraction of trials with at least one platform in the common LoS
    region between the user and the base station."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    successes = 0
    for t in range(trials):
        rng = trial_rng(seed, "relay", t)
        user = _resolve(setup.user, rng)
        cons = _resolve(setup.platforms, rng)
        if len(cons) and geom.common_los_mask(cons.positions, user, setup.base_station).any():
            successes += 1
    return probability_estimate(successes, trials)


def analytic_bpp_availability(p_single: float, n: int) -> float:
    """Null-probability availability of an n-point BPP: 1 - (1 - p)^n,
    where p is the common-LoS area fraction of the deployment region."""
    if not 0.0 <= p_single <= 1.0:
        raise ValueError(f"p_single must be in [0, 1], got {p_single}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return 1.0 - (1.0 - p_single) ** n


# --- capacity, efficiency, latency, availability -----------------------------


def link_capacity_bps(snr_linear: float, bandwidth_hz: float) -> float:
    """Shannon-Hartley capacity B * log2(1 + snr)."""
    if snr_linear < 0:
        raise ValueError(f"snr must be >= 0, got {snr_linear}")
    return bandwidth_hz * math.log2(1.0 + snr_linear)


def path_capacity(hop_capacities: Sequence[float]) -> float:
    """End-to-end capacity of a multi-hop path: the weakest hop."""
    if len(hop_capacities) == 0:
        raise ValueError("hop_capacities must be nonempty")
    return min(hop_capacities)


def energy_efficiency(capacity_bps: float, tx_power_w: float) -> float:
    """Delivered bits per joule of transmit energy."""
    if not tx_power_w > 0:
        raise ValueError(f"tx power must be positive, got {tx_power_w}")
    return capacity_bps / tx_power_w


def path_energy_efficiency(hop_capacities: Sequence[float], hop_powers_w: Sequence[float]) -> float:
    """Path capacity divided by the sum of hop transmit powers."""
    if len(hop_capacities) != len(hop_powers_w):
        raise ValueError("capacities and powers must have equal length")
    return energy_efficiency(path_capacity(hop_capacities), math.fsum(hop_powers_w))


def propagation_latency(path: Sequence[GeoPoint]) -> float:
    """Total signal travel time along the polyline of hops, in seconds."""
    if len(path) < 2:
        raise ValueError("path needs at least 2 points")
    total_km = math.fsum(geom.slant_range(a, b) for a, b in zip(path, path[1:]))
    return total_km / SPEED_OF_LIGHT_KM_S


def orbital_period_s(orbit_radius: float) -> float:
    """Circular-orbit period from Kepler's third law."""
    return 2.0 * math.pi * math.sqrt(orbit_radius**3 / MU_EARTH_KM3_S2)


def pass_duration(orbit_radius: float, user_radius: float, plane_offset: float) -> float:
    """Visibility time of one pass: session-arc fraction of the period."""
    alpha = geom.session_arc_half_angle(orbit_radius, user_radius, plane_offset)
    return (alpha / math.pi) * orbital_period_s(orbit_radius)


def lap_availability(d: LapDutyCycle) -> float:
    """Serving-time fraction of the full serve/backhaul/charge cycle."""
    return d.serving / (d.serving + d.backhaul + d.charging)
