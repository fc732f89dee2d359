"""Scenario configs, runners, and output files."""

import json
import math

import numpy as np
import pytest

from ntnsim.channel import Nakagami, ShadowedRician
from ntnsim.pointproc import Tier
from ntnsim.scenarios import (
    ConfigError,
    CurveSpec,
    ScenarioConfig,
    apply_overrides,
    config_from_dict,
    config_schema_text,
    config_to_dict,
    load_config,
    post_disaster_samples,
    run_scenario,
    scenario_k_coverage,
    scenario_post_disaster,
    scenario_remote,
    write_config,
    write_results,
)

MINIMAL = 'kind = "remote"\ntrials = 10\nseed = 1\n'


def small_config(kind, **kw):
    doc = {"kind": kind, "trials": kw.pop("trials", 50), "seed": kw.pop("seed", 3)}
    doc.update(kw)
    return config_from_dict(doc)


# --- parsing and validation --------------------------------------------------


def test_load_minimal():
    cfg = load_config(MINIMAL)
    assert cfg.kind == "remote" and cfg.trials == 10 and cfg.seed == 1
    assert cfg.remote.n_hap == (0, 25, 50)


def test_unknown_key_names_path():
    with pytest.raises(ConfigError, match="remote.bogus"):
        load_config(MINIMAL + "\n[remote]\nbogus = 3\n")


def test_wrong_type_names_path():
    with pytest.raises(ConfigError, match="trials"):
        load_config('kind = "remote"\ntrials = "lots"\nseed = 1\n')


def test_missing_required_key():
    with pytest.raises(ConfigError, match="seed"):
        load_config('kind = "remote"\ntrials = 5\n')


def test_default_seed_fallback():
    cfg = load_config('kind = "remote"\ntrials = 5\n', default_seed=99)
    assert cfg.seed == 99


def test_bad_kind():
    with pytest.raises(ConfigError, match="kind"):
        load_config('kind = "nope"\ntrials = 5\nseed = 1\n')


def test_invalid_toml():
    with pytest.raises(ConfigError, match="TOML"):
        load_config("kind = [unterminated")


def test_negative_counts_rejected():
    with pytest.raises(ConfigError, match="kcoverage"):
        small_config("kcoverage", kcoverage={"n_hap": -1})
    with pytest.raises(ConfigError, match="ks"):
        small_config("kcoverage", kcoverage={"ks": [0]})


def test_radio_override_and_fading_kinds():
    cfg = small_config(
        "remote",
        radio={
            "lap": {"tx_power_dbw": 3.0, "fading": "nakagami", "nakagami_m": 2.0},
            "sat": {"fading": "none"},
        },
    )
    assert cfg.lap_radio.tx_power_dbw == 3.0
    assert cfg.lap_radio.fading == Nakagami(2.0, 1.0)
    assert cfg.hap_radio.fading == ShadowedRician(0.126, 10.1, 0.835)
    assert cfg.sat_radio.fading.mean_gain == 1.0
    with pytest.raises(ConfigError, match="radio.lap.fading"):
        small_config("remote", radio={"lap": {"fading": "rayleigh"}})


def test_roundtrip_all_kinds():
    for kind in ("remote", "postdisaster", "kcoverage"):
        cfg = small_config(kind)
        assert load_config(write_config(cfg)) == cfg


def test_roundtrip_preserves_curves():
    cfg = small_config(
        "postdisaster",
        postdisaster={
            "curves": [{"label": "tiny", "n_lap": 5, "n_hap": 1, "n_sat": 2}]
        },
    )
    cfg2 = load_config(write_config(cfg))
    assert cfg2.postdisaster.curves == (CurveSpec("tiny", 5, 1, 2),)


def test_config_to_dict_is_schema_valid():
    cfg = small_config("kcoverage")
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_apply_overrides():
    doc = {"kind": "remote", "trials": 5, "seed": 1}
    out = apply_overrides(doc, ["trials=100", "remote.user_density_per_km2=2.5", 'kind="kcoverage"'])
    assert out["trials"] == 100
    assert out["remote"]["user_density_per_km2"] == 2.5
    assert out["kind"] == "kcoverage"
    assert doc["trials"] == 5  # original untouched


def test_apply_overrides_rejects_malformed():
    with pytest.raises(ConfigError, match="key=value"):
        apply_overrides({}, ["novalue"])


def test_schema_text_lists_paths():
    text = config_schema_text()
    for path in ("remote.n_sat", "kcoverage.thresholds_db", "radio.lap.tx_power_dbw"):
        assert path in text


# --- runners -----------------------------------------------------------------


def test_remote_table_shape_and_monotonicity():
    cfg = small_config("remote", trials=300)
    table = scenario_remote(cfg)
    assert table.columns == ("n_sat", "n_hap", "trials", "availability", "ci_low", "ci_high")
    assert len(table.rows) == len(cfg.remote.n_sat) * len(cfg.remote.n_hap)
    grid = {(r[0], r[1]): r[3] for r in table.rows}
    # Prefix coupling: availability is monotone in both counts, per trial.
    for ns in cfg.remote.n_sat:
        for nh in cfg.remote.n_hap:
            if (ns, nh) == (0, 0):
                assert grid[(0, 0)] == 0.0
            if ns > 0:
                prev = cfg.remote.n_sat[cfg.remote.n_sat.index(ns) - 1]
                assert grid[(ns, nh)] >= grid[(prev, nh)]
            if nh > 0:
                prev = cfg.remote.n_hap[cfg.remote.n_hap.index(nh) - 1]
                assert grid[(ns, nh)] >= grid[(ns, prev)]


def test_remote_workers_identical():
    cfg = small_config("remote", trials=200)
    a = scenario_remote(cfg, workers=1).csv_text()
    b = scenario_remote(cfg, workers=4).csv_text()
    assert a == b


def test_postdisaster_samples_and_cdf():
    cfg = small_config(
        "postdisaster",
        trials=400,
        postdisaster={"curves": [{"label": "c1", "n_lap": 50, "n_hap": 5, "n_sat": 0}]},
    )
    samples = post_disaster_samples(cfg)
    data = samples["c1"]
    assert data.shape == (400, 3)
    served = data[data[:, 0] >= 0]
    assert len(served) > 0
    assert np.all(served[:, 1] > 0)  # capacity
    assert np.all(served[:, 2] > 0)  # energy efficiency
    cap, ee = scenario_post_disaster(cfg, samples=samples)
    assert cap.columns == ("label", "tier", "capacity_bps", "cdf")
    assert ee.columns == ("label", "tier", "ee_bits_per_joule", "cdf")
    for table in (cap, ee):
        by_group = {}
        for label, tier, value, q in table.rows:
            by_group.setdefault((label, tier), []).append((q, value))
        for pts in by_group.values():
            qs = [q for q, _ in pts]
            vals = [v for _, v in pts]
            assert qs == sorted(qs)
            assert vals == sorted(vals)  # CDF is monotone
            assert qs[0] == 0.0 and qs[-1] == 1.0


def test_postdisaster_no_coverage_flag():
    cfg = small_config(
        "postdisaster",
        trials=20,
        postdisaster={"curves": [{"label": "empty", "n_lap": 0, "n_hap": 0, "n_sat": 0}]},
    )
    cap, _ = scenario_post_disaster(cfg)
    assert cap.flags == {"empty": "no coverage"}
    assert cap.rows == []


def test_kcoverage_table_monotone():
    cfg = small_config(
        "kcoverage",
        trials=300,
        kcoverage={"n_hap": 10, "n_lap": 100, "ks": [1, 2, 4], "thresholds_db": [0.0, 10.0, 20.0]},
    )
    table = scenario_k_coverage(cfg)
    prob = {(r[1], r[0]): r[2] for r in table.rows}
    # Common random numbers make these exact, not just statistical.
    for k in (1, 2, 4):
        assert prob[(k, 0.0)] >= prob[(k, 10.0)] >= prob[(k, 20.0)]
    for thr in (0.0, 10.0, 20.0):
        assert prob[(1, thr)] >= prob[(2, thr)] >= prob[(4, thr)]


def test_run_scenario_manifest(tmp_path):
    cfg = small_config("remote", trials=50)
    result = run_scenario(cfg)
    paths = write_results(result, tmp_path)
    names = sorted(p.rsplit("/", 1)[-1] for p in paths)
    assert names == ["availability.csv", "manifest.json"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed"] == cfg.seed
    assert manifest["trials"] == 50
    assert manifest["kind"] == "remote"
    assert config_from_dict(manifest["config"]) == cfg
    text = (tmp_path / "availability.csv").read_text()
    assert text.startswith("n_sat,n_hap,trials,availability,ci_low,ci_high\n")
    assert "\r" not in text


def test_write_results_json_format(tmp_path):
    cfg = small_config("remote", trials=20)
    result = run_scenario(cfg)
    write_results(result, tmp_path, fmt="json")
    doc = json.loads((tmp_path / "availability.json").read_text())
    assert doc["columns"][0] == "n_sat"
    with pytest.raises(ConfigError, match="format"):
        write_results(result, tmp_path, fmt="xml")


def test_runs_deterministic():
    cfg = small_config("kcoverage", trials=100, kcoverage={"n_hap": 5, "n_lap": 20})
    a = scenario_k_coverage(cfg).csv_text()
    b = scenario_k_coverage(cfg).csv_text()
    assert a == b
