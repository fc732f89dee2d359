"""Link budget: free-space loss, noise, small-scale fading, SNR/SINR.

Powers are dBW, gains dB, frequencies and bandwidths Hz, distances km.
Fading gains are linear power gains.  Samplers take an explicit generator
and are pure given its state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .geom import SPEED_OF_LIGHT_KM_S

SPEED_OF_LIGHT_M_S = SPEED_OF_LIGHT_KM_S * 1000.0

# 20*log10(4*pi/c) with c in m/s; fspl(d, f) = 20log10(d_m) + 20log10(f) + this.
_FSPL_CONST_DB = 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT_M_S)

NO_SIGNAL_DB = float("-inf")


@dataclass(frozen=True)
class Nakagami:
    """Nakagami-m power fading: gain ~ Gamma(shape m, scale omega/m)."""

    m: float
    omega: float

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami m must be >= 0.5, got {self.m}")
        if not self.omega > 0.0:
            raise ValueError(f"Nakagami omega must be positive, got {self.omega}")

    @property
    def mean_gain(self) -> float:
        return self.omega


@dataclass(frozen=True)
class ShadowedRician:
    """Rician fading whose LoS component power is Nakagami-shadowed.

    b is the per-component scattered power, m the shadowing severity and
    omega the average LoS power; E[gain] = 2*b + omega.
    """

    b: float
    m: float
    omega: float

    def __post_init__(self):
        for name in ("b", "m", "omega"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"ShadowedRician {name} must be positive")

    @property
    def mean_gain(self) -> float:
        return 2.0 * self.b + self.omega


@dataclass(frozen=True)
class NoFading:
    """Deterministic unit power gain."""

    @property
    def mean_gain(self) -> float:
        return 1.0


FadingSpec = Union[Nakagami, ShadowedRician, NoFading]


@dataclass(frozen=True)
class NoiseSpec:
    """Thermal noise power spectral density in dBm/Hz."""

    psd_dbm_hz: float = -174.0

    def __post_init__(self):
        if not math.isfinite(self.psd_dbm_hz):
            raise ValueError("noise psd must be finite")


@dataclass(frozen=True)
class RadioParams:
    tx_power_dbw: float
    tx_gain_db: float
    rx_gain_db: float
    frequency_hz: float
    bandwidth_hz: float
    fading: FadingSpec

    def __post_init__(self):
        if not self.frequency_hz > 0.0:
            raise ValueError(f"frequency must be positive, got {self.frequency_hz}")
        if not self.bandwidth_hz > 0.0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")

    @property
    def tx_power_w(self) -> float:
        return 10.0 ** (self.tx_power_dbw / 10.0)


# Default per-tier radio parameters: 2 GHz carrier, 20 MHz bandwidth,
# powers/gains 1/8/15 dBW and 10/20/70 dB for LAP/HAP/SAT.  LAP links use
# Nakagami(3, 1); HAP and satellite links use average-shadowing
# Shadowed-Rician(0.126, 10.1, 0.835).  All overridable per scenario.
DEFAULT_LAP_RADIO = RadioParams(1.0, 10.0, 0.0, 2.0e9, 2.0e7, Nakagami(3.0, 1.0))
DEFAULT_HAP_RADIO = RadioParams(8.0, 20.0, 0.0, 2.0e9, 2.0e7, ShadowedRician(0.126, 10.1, 0.835))
DEFAULT_SAT_RADIO = RadioParams(15.0, 70.0, 0.0, 2.0e9, 2.0e7, ShadowedRician(0.126, 10.1, 0.835))


def fspl_db(distance_km: float, frequency_hz: float) -> float:
    """Free-space (Friis) path loss in dB."""
    if not distance_km > 0.0:
        raise ValueError(f"distance must be positive, got {distance_km}")
    return 20.0 * math.log10(distance_km * 1000.0) + 20.0 * math.log10(frequency_hz) + _FSPL_CONST_DB


def noise_power_dbw(noise: NoiseSpec, bandwidth_hz: float) -> float:
    """Integrated thermal noise power in dBW."""
    if not bandwidth_hz > 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return noise.psd_dbm_hz + 10.0 * math.log10(bandwidth_hz) - 30.0


def link_budget_const_db(radio: RadioParams) -> float:
    """Distance-independent part of the mean received power:
    mean_rx_power_dbw = const - 20*log10(distance_km)."""
    return (
        radio.tx_power_dbw
        + radio.tx_gain_db
        + radio.rx_gain_db
        - 20.0 * math.log10(radio.frequency_hz)
        - _FSPL_CONST_DB
        - 60.0
    )


def mean_rx_power_dbw(tx: RadioParams, distance_km: float) -> float:
    """Fading-free average received power, used for association."""
    return tx.tx_power_dbw + tx.tx_gain_db + tx.rx_gain_db - fspl_db(distance_km, tx.frequency_hz)


def sample_fading(spec: FadingSpec, rng: np.random.Generator, size=None):
    """Draw linear power gain(s) from the given fading distribution."""
    if isinstance(spec, NoFading):
        return 1.0 if size is None else np.ones(size)
    if isinstance(spec, Nakagami):
        return rng.gamma(spec.m, spec.omega / spec.m, size=size)
    if isinstance(spec, ShadowedRician):
        s = np.sqrt(rng.gamma(spec.m, spec.omega / spec.m, size=size))
        sigma = math.sqrt(spec.b)
        x = rng.normal(0.0, sigma, size=size)
        y = rng.normal(0.0, sigma, size=size)
        return (s + x) ** 2 + y**2
    raise TypeError(f"unknown fading spec: {spec!r}")


def snr_db(tx: RadioParams, distance_km: float, fading_gain: float, noise: NoiseSpec) -> float:
    """Instantaneous SNR for a single link."""
    if fading_gain < 0.0:
        raise ValueError(f"fading gain must be nonnegative, got {fading_gain}")
    if fading_gain == 0.0:
        return NO_SIGNAL_DB
    return (
        mean_rx_power_dbw(tx, distance_km)
        + 10.0 * math.log10(fading_gain)
        - noise_power_dbw(noise, tx.bandwidth_hz)
    )


@dataclass(frozen=True)
class Link:
    """One transmitter-receiver link with a realized fading gain."""

    radio: RadioParams
    distance_km: float
    fading_gain: float = 1.0

    @property
    def rx_power_dbw(self) -> float:
        if self.fading_gain == 0.0:
            return NO_SIGNAL_DB
        return mean_rx_power_dbw(self.radio, self.distance_km) + 10.0 * math.log10(self.fading_gain)


def sinr_db(
    serving: Link,
    interferers: Sequence[Link],
    noise: NoiseSpec,
    mode: str = "sinr",
) -> float:
    """SINR (or SNR when mode == "snr") of the serving link in dB.

    Each interferer carries its own fading realization; the sum is done in
    the linear power domain over the serving link's bandwidth.
    """
    if mode not in ("snr", "sinr"):
        raise ValueError(f"mode must be 'snr' or 'sinr', got {mode!r}")
    signal_db = serving.rx_power_dbw
    if signal_db == NO_SIGNAL_DB:
        return NO_SIGNAL_DB
    noise_w = 10.0 ** (noise_power_dbw(noise, serving.radio.bandwidth_hz) / 10.0)
    interference_w = 0.0
    if mode == "sinr":
        for link in interferers:
            p = link.rx_power_dbw
            if p != NO_SIGNAL_DB:
                interference_w += 10.0 ** (p / 10.0)
    return signal_db - 10.0 * math.log10(noise_w + interference_w)
