"""Link budget and fading samplers against hand-computed values."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntnsim.channel import (
    DEFAULT_HAP_RADIO,
    DEFAULT_LAP_RADIO,
    DEFAULT_SAT_RADIO,
    Link,
    Nakagami,
    NoFading,
    NO_SIGNAL_DB,
    NoiseSpec,
    RadioParams,
    ShadowedRician,
    fspl_db,
    link_budget_const_db,
    mean_rx_power_dbw,
    noise_power_dbw,
    sample_fading,
    sinr_db,
    snr_db,
)
from ntnsim.rng import trial_rng


def test_fspl_values():
    # 80 m at 2 GHz and 550 km at 2 GHz, Friis free-space loss.
    assert fspl_db(0.08, 2.0e9) == pytest.approx(76.53018287500186, abs=1e-9)
    assert fspl_db(550.0, 2.0e9) == pytest.approx(153.27563692504788, abs=1e-9)


def test_fspl_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        fspl_db(0.0, 2.0e9)
    with pytest.raises(ValueError):
        fspl_db(-1.0, 2.0e9)


def test_noise_power_20mhz():
    assert noise_power_dbw(NoiseSpec(), 2.0e7) == pytest.approx(-130.9897000433602, abs=1e-9)


def test_mean_rx_power_lap_overhead():
    # LAP defaults 80 m overhead: 1 + 10 - 76.530 dBW.
    assert mean_rx_power_dbw(DEFAULT_LAP_RADIO, 0.08) == pytest.approx(
        -65.53018287500186, abs=1e-9
    )


def test_link_budget_const_consistent():
    for radio in (DEFAULT_LAP_RADIO, DEFAULT_HAP_RADIO, DEFAULT_SAT_RADIO):
        for d in (0.08, 35.0, 550.0, 2703.8):
            assert link_budget_const_db(radio) - 20.0 * math.log10(d) == pytest.approx(
                mean_rx_power_dbw(radio, d), abs=1e-9
            )


def test_snr_lap_overhead():
    val = snr_db(DEFAULT_LAP_RADIO, 0.08, 1.0, NoiseSpec())
    assert val == pytest.approx(65.45951716835833, abs=1e-9)


def test_snr_zero_gain_is_no_signal():
    assert snr_db(DEFAULT_LAP_RADIO, 0.08, 0.0, NoiseSpec()) == NO_SIGNAL_DB
    with pytest.raises(ValueError):
        snr_db(DEFAULT_LAP_RADIO, 0.08, -0.5, NoiseSpec())


def test_tx_power_watts():
    assert DEFAULT_LAP_RADIO.tx_power_w == pytest.approx(10.0 ** 0.1)
    assert DEFAULT_SAT_RADIO.tx_power_w == pytest.approx(10.0 ** 1.5)


def test_mean_gains():
    assert Nakagami(3.0, 1.0).mean_gain == 1.0
    assert ShadowedRician(0.126, 10.1, 0.835).mean_gain == pytest.approx(1.087)
    assert NoFading().mean_gain == 1.0


def test_fading_parameter_validation():
    with pytest.raises(ValueError):
        Nakagami(0.2, 1.0)
    with pytest.raises(ValueError):
        Nakagami(1.0, 0.0)
    with pytest.raises(ValueError):
        ShadowedRician(0.0, 10.1, 0.835)


def test_radio_validation():
    with pytest.raises(ValueError):
        RadioParams(0.0, 0.0, 0.0, 0.0, 2.0e7, NoFading())
    with pytest.raises(ValueError):
        RadioParams(0.0, 0.0, 0.0, 2.0e9, -1.0, NoFading())


def test_nakagami_moments_and_survival():
    rng = trial_rng(1, "test/nakagami", 0)
    g = sample_fading(Nakagami(3.0, 1.0), rng, size=1_000_000)
    assert float(np.mean(g)) == pytest.approx(1.0, rel=0.01)
    # P(gain > 1) for Gamma(3, 1/3): exp(-3) * (1 + 3 + 4.5).
    assert float(np.mean(g > 1.0)) == pytest.approx(0.42319008112684353, abs=0.002)


def test_shadowed_rician_moments():
    rng = trial_rng(1, "test/sr", 0)
    spec = ShadowedRician(0.126, 10.1, 0.835)
    g = sample_fading(spec, rng, size=1_000_000)
    assert float(np.mean(g)) == pytest.approx(spec.mean_gain, rel=0.01)
    assert float(np.min(g)) >= 0.0


def test_no_fading_sampler():
    rng = trial_rng(1, "test/nf", 0)
    assert sample_fading(NoFading(), rng) == 1.0
    np.testing.assert_array_equal(sample_fading(NoFading(), rng, size=5), np.ones(5))


def test_sample_fading_deterministic():
    a = sample_fading(Nakagami(3.0, 1.0), trial_rng(9, "s", 4), size=6)
    b = sample_fading(Nakagami(3.0, 1.0), trial_rng(9, "s", 4), size=6)
    np.testing.assert_array_equal(a, b)


def test_link_rx_power():
    link = Link(DEFAULT_LAP_RADIO, 0.08, 1.0)
    assert link.rx_power_dbw == pytest.approx(-65.53018287500186, abs=1e-9)
    assert Link(DEFAULT_LAP_RADIO, 0.08, 0.0).rx_power_dbw == NO_SIGNAL_DB


def test_sinr_reduces_to_snr_without_interferers():
    serving = Link(DEFAULT_LAP_RADIO, 0.08, 1.0)
    assert sinr_db(serving, [], NoiseSpec()) == pytest.approx(
        snr_db(DEFAULT_LAP_RADIO, 0.08, 1.0, NoiseSpec()), abs=1e-12
    )
    assert sinr_db(serving, [Link(DEFAULT_LAP_RADIO, 0.08, 1.0)], NoiseSpec(), "snr") == (
        pytest.approx(snr_db(DEFAULT_LAP_RADIO, 0.08, 1.0, NoiseSpec()), abs=1e-12)
    )


def test_sinr_equal_interferer_near_zero_db():
    # One equal-power interferer dominating noise: SINR ~ 0 dB.
    serving = Link(DEFAULT_LAP_RADIO, 0.08, 1.0)
    val = sinr_db(serving, [Link(DEFAULT_LAP_RADIO, 0.08, 1.0)], NoiseSpec())
    assert val == pytest.approx(0.0, abs=1e-5)


def test_sinr_mode_validation():
    with pytest.raises(ValueError):
        sinr_db(Link(DEFAULT_LAP_RADIO, 0.08), [], NoiseSpec(), "bogus")


@given(
    d=st.floats(min_value=1e-3, max_value=1e5),
    f=st.floats(min_value=1e8, max_value=1e11),
)
@settings(max_examples=60)
def test_fspl_monotone(d, f):
    assert fspl_db(2.0 * d, f) > fspl_db(d, f)
    assert fspl_db(d, 2.0 * f) > fspl_db(d, f)
    # 20 dB per decade of distance.
    assert fspl_db(10.0 * d, f) - fspl_db(d, f) == pytest.approx(20.0, abs=1e-6)
