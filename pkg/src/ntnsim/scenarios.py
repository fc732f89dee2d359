"""Config-driven reconstruction of the three application experiments.

A scenario is described by a TOML document (see `config_schema_text`),
validated into an immutable `ScenarioConfig`.  Runners distribute trials
over worker processes under the counter-based RNG contract, so the emitted
CSV files are byte-identical for any worker count.
"""

from __future__ import annotations

import json
import math
import time

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import partial
from typing import Callable, Optional

import numpy as np

from . import __version__
from .channel import (
    Nakagami,
    NoFading,
    NoiseSpec,
    RadioParams,
    ShadowedRician,
)
from .geom import EARTH_RADIUS_KM, GeoPoint, SphericalCap, common_los_mask
from .metrics import associate, draw_fading, probability_estimate, _snr_samples
from .pointproc import (
    Tier,
    concat,
    sample_bpp_cap,
    sample_bpp_sphere,
    sample_cap_point,
    sample_disk_point,
    sample_ppp_disk,
)
from .rng import trial_rng

KINDS = ("remote", "postdisaster", "kcoverage")

_INT_SENTINEL = np.iinfo(np.int32).max


class ConfigError(ValueError):
    """Raised for invalid scenario configuration, naming the faulty field."""


# --- configuration model -----------------------------------------------------


@dataclass(frozen=True)
class GeometryConfig:
    user_cap_apex_rad: float = math.pi / 45.0
    hap_radius_km: float = 6391.0
    sat_radius_km: float = 6921.0
    bs_arc_km: float = 500.0
    disk_radius_km: float = 30.0
    lap_altitude_m: float = 80.0


@dataclass(frozen=True)
class RemoteParams:
    n_sat: tuple[int, ...] = (0, 10, 20, 30, 40, 50, 60)
    n_hap: tuple[int, ...] = (0, 25, 50)
    user_density_per_km2: float = 1.0


@dataclass(frozen=True)
class CurveSpec:
    label: str
    n_lap: int
    n_hap: int
    n_sat: int


DEFAULT_CURVES = (
    CurveSpec("lap100_hap10", 100, 10, 0),
    CurveSpec("lap1000_hap10", 1000, 10, 0),
    CurveSpec("lap1000_hap40", 1000, 40, 0),
)


@dataclass(frozen=True)
class PostDisasterParams:
    user_density_per_km2: float = 100.0
    curves: tuple[CurveSpec, ...] = DEFAULT_CURVES


@dataclass(frozen=True)
class KCoverageParams:
    n_hap: int = 40
    n_lap: int = 1000
    n_sat: int = 0
    ks: tuple[int, ...] = (1, 4)
    thresholds_db: tuple[float, ...] = (-5.0, 0.0, 5.0, 10.0, 15.0, 20.0)


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    trials: int
    seed: int
    geometry: GeometryConfig = GeometryConfig()
    noise: NoiseSpec = NoiseSpec()
    lap_radio: RadioParams = None  # type: ignore[assignment]
    hap_radio: RadioParams = None  # type: ignore[assignment]
    sat_radio: RadioParams = None  # type: ignore[assignment]
    remote: RemoteParams = RemoteParams()
    postdisaster: PostDisasterParams = PostDisasterParams()
    kcoverage: KCoverageParams = KCoverageParams()

    def __post_init__(self):
        from .channel import DEFAULT_HAP_RADIO, DEFAULT_LAP_RADIO, DEFAULT_SAT_RADIO

        if self.kind not in KINDS:
            raise ConfigError(f"kind: must be one of {KINDS}, got {self.kind!r}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.lap_radio is None:
            object.__setattr__(self, "lap_radio", DEFAULT_LAP_RADIO)
        if self.hap_radio is None:
            object.__setattr__(self, "hap_radio", DEFAULT_HAP_RADIO)
        if self.sat_radio is None:
            object.__setattr__(self, "sat_radio", DEFAULT_SAT_RADIO)
        for path, value in (
            ("remote.n_sat", self.remote.n_sat),
            ("remote.n_hap", self.remote.n_hap),
        ):
            if any(v < 0 for v in value):
                raise ConfigError(f"{path}: counts must be >= 0")
            if not value:
                raise ConfigError(f"{path}: must be nonempty")
        for i, c in enumerate(self.postdisaster.curves):
            if min(c.n_lap, c.n_hap, c.n_sat) < 0:
                raise ConfigError(f"postdisaster.curves[{i}]: counts must be >= 0")
        kc = self.kcoverage
        if min(kc.n_hap, kc.n_lap, kc.n_sat) < 0:
            raise ConfigError("kcoverage: counts must be >= 0")
        if any(k < 1 for k in kc.ks):
            raise ConfigError("kcoverage.ks: every k must be >= 1")

    def radio(self, tier: Tier) -> RadioParams:
        return {Tier.LAP: self.lap_radio, Tier.HAP: self.hap_radio, Tier.SAT: self.sat_radio}[tier]

    @property
    def user_cap(self) -> SphericalCap:
        return SphericalCap(np.array([0.0, 0.0, 1.0]), self.geometry.user_cap_apex_rad, EARTH_RADIUS_KM)

    @property
    def hap_cap(self) -> SphericalCap:
        return SphericalCap(np.array([0.0, 0.0, 1.0]), self.geometry.user_cap_apex_rad, self.geometry.hap_radius_km)

    @property
    def lap_cap(self) -> SphericalCap:
        radius = EARTH_RADIUS_KM + self.geometry.lap_altitude_m / 1000.0
        return SphericalCap(np.array([0.0, 0.0, 1.0]), self.geometry.user_cap_apex_rad, radius)

    @property
    def bs_point(self) -> GeoPoint:
        return GeoPoint.from_polar(EARTH_RADIUS_KM, self.geometry.bs_arc_km / EARTH_RADIUS_KM)


# --- config document parsing -------------------------------------------------

_RADIO_KEYS = {
    "tx_power_dbw": float,
    "tx_gain_db": float,
    "rx_gain_db": float,
    "frequency_hz": float,
    "bandwidth_hz": float,
    "fading": str,
    "nakagami_m": float,
    "nakagami_omega": float,
    "sr_b": float,
    "sr_m": float,
    "sr_omega": float,
}

_SCHEMA: dict = {
    "kind": str,
    "trials": int,
    "seed": int,
    "geometry": {f.name: float for f in fields(GeometryConfig)},
    "noise": {"psd_dbm_hz": float},
    "radio": {"lap": _RADIO_KEYS, "hap": _RADIO_KEYS, "sat": _RADIO_KEYS},
    "remote": {"n_sat": [int], "n_hap": [int], "user_density_per_km2": float},
    "postdisaster": {
        "user_density_per_km2": float,
        "curves": [{"label": str, "n_lap": int, "n_hap": int, "n_sat": int}],
    },
    "kcoverage": {
        "n_hap": int,
        "n_lap": int,
        "n_sat": int,
        "ks": [int],
        "thresholds_db": [float],
    },
}

_REQUIRED = ("kind", "trials", "seed")


def _check(doc, schema, path):
    if isinstance(schema, dict):
        if not isinstance(doc, dict):
            raise ConfigError(f"{path or '<root>'}: expected a table")
        for key, value in doc.items():
            child = f"{path}.{key}" if path else key
            if key not in schema:
                raise ConfigError(f"{child}: unknown key")
            _check(value, schema[key], child)
    elif isinstance(schema, list):
        if not isinstance(doc, list):
            raise ConfigError(f"{path}: expected a list")
        for i, item in enumerate(doc):
            _check(item, schema[0], f"{path}[{i}]")
    elif schema is float:
        if not isinstance(doc, (int, float)) or isinstance(doc, bool):
            raise ConfigError(f"{path}: expected a number, got {type(doc).__name__}")
    elif schema is int:
        if not isinstance(doc, int) or isinstance(doc, bool):
            raise ConfigError(f"{path}: expected an integer, got {type(doc).__name__}")
    elif schema is str:
        if not isinstance(doc, str):
            raise ConfigError(f"{path}: expected a string, got {type(doc).__name__}")
    else:  # pragma: no cover
        raise AssertionError(f"bad schema node at {path}")


def _radio_from_doc(doc: dict, default: RadioParams, path: str) -> RadioParams:
    kind = doc.get("fading")
    if kind is None:
        fading = default.fading
    elif kind == "nakagami":
        fading = Nakagami(doc.get("nakagami_m", 3.0), doc.get("nakagami_omega", 1.0))
    elif kind == "shadowed_rician":
        fading = ShadowedRician(
            doc.get("sr_b", 0.126), doc.get("sr_m", 10.1), doc.get("sr_omega", 0.835)
        )
    elif kind == "none":
        fading = NoFading()
    else:
        raise ConfigError(
            f"{path}.fading: must be 'nakagami', 'shadowed_rician' or 'none', got {kind!r}"
        )
    return RadioParams(
        float(doc.get("tx_power_dbw", default.tx_power_dbw)),
        float(doc.get("tx_gain_db", default.tx_gain_db)),
        float(doc.get("rx_gain_db", default.rx_gain_db)),
        float(doc.get("frequency_hz", default.frequency_hz)),
        float(doc.get("bandwidth_hz", default.bandwidth_hz)),
        fading,
    )


def config_from_dict(doc: dict, default_seed: Optional[int] = None) -> ScenarioConfig:
    """Validate a parsed configuration document into a ScenarioConfig."""
    from .channel import DEFAULT_HAP_RADIO, DEFAULT_LAP_RADIO, DEFAULT_SAT_RADIO

    _check(doc, _SCHEMA, "")
    if "seed" not in doc and default_seed is not None:
        doc = {**doc, "seed": int(default_seed)}
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigError(f"{key}: required key is missing")
    geo = GeometryConfig(**{k: float(v) for k, v in doc.get("geometry", {}).items()})
    noise = NoiseSpec(float(doc.get("noise", {}).get("psd_dbm_hz", -174.0)))
    radio_doc = doc.get("radio", {})
    remote_doc = doc.get("remote", {})
    remote = RemoteParams(
        tuple(remote_doc.get("n_sat", RemoteParams.n_sat)),
        tuple(remote_doc.get("n_hap", RemoteParams.n_hap)),
        float(remote_doc.get("user_density_per_km2", RemoteParams.user_density_per_km2)),
    )
    pd_doc = doc.get("postdisaster", {})
    curves = tuple(
        CurveSpec(c["label"], c["n_lap"], c["n_hap"], c["n_sat"]) for c in pd_doc["curves"]
    ) if "curves" in pd_doc else DEFAULT_CURVES
    postdisaster = PostDisasterParams(
        float(pd_doc.get("user_density_per_km2", PostDisasterParams.user_density_per_km2)),
        curves,
    )
    kc_doc = doc.get("kcoverage", {})
    kcoverage = KCoverageParams(
        int(kc_doc.get("n_hap", KCoverageParams.n_hap)),
        int(kc_doc.get("n_lap", KCoverageParams.n_lap)),
        int(kc_doc.get("n_sat", KCoverageParams.n_sat)),
        tuple(kc_doc.get("ks", KCoverageParams.ks)),
        tuple(float(t) for t in kc_doc.get("thresholds_db", KCoverageParams.thresholds_db)),
    )
    return ScenarioConfig(
        kind=doc["kind"],
        trials=int(doc["trials"]),
        seed=int(doc["seed"]),
        geometry=geo,
        noise=noise,
        lap_radio=_radio_from_doc(radio_doc.get("lap", {}), DEFAULT_LAP_RADIO, "radio.lap"),
        hap_radio=_radio_from_doc(radio_doc.get("hap", {}), DEFAULT_HAP_RADIO, "radio.hap"),
        sat_radio=_radio_from_doc(radio_doc.get("sat", {}), DEFAULT_SAT_RADIO, "radio.sat"),
        remote=remote,
        postdisaster=postdisaster,
        kcoverage=kcoverage,
    )


def load_config(text: str, default_seed: Optional[int] = None) -> ScenarioConfig:
    """Parse and validate a TOML scenario document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    return config_from_dict(doc, default_seed=default_seed)


def _fading_doc(radio: RadioParams) -> dict:
    f = radio.fading
    if isinstance(f, Nakagami):
        return {"fading": "nakagami", "nakagami_m": f.m, "nakagami_omega": f.omega}
    if isinstance(f, ShadowedRician):
        return {"fading": "shadowed_rician", "sr_b": f.b, "sr_m": f.m, "sr_omega": f.omega}
    return {"fading": "none"}


def config_to_dict(cfg: ScenarioConfig) -> dict:
    def radio_doc(r: RadioParams) -> dict:
        return {
            "tx_power_dbw": r.tx_power_dbw,
            "tx_gain_db": r.tx_gain_db,
            "rx_gain_db": r.rx_gain_db,
            "frequency_hz": r.frequency_hz,
            "bandwidth_hz": r.bandwidth_hz,
            **_fading_doc(r),
        }

    return {
        "kind": cfg.kind,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "geometry": {f.name: getattr(cfg.geometry, f.name) for f in fields(GeometryConfig)},
        "noise": {"psd_dbm_hz": cfg.noise.psd_dbm_hz},
        "radio": {
            "lap": radio_doc(cfg.lap_radio),
            "hap": radio_doc(cfg.hap_radio),
            "sat": radio_doc(cfg.sat_radio),
        },
        "remote": {
            "n_sat": list(cfg.remote.n_sat),
            "n_hap": list(cfg.remote.n_hap),
            "user_density_per_km2": cfg.remote.user_density_per_km2,
        },
        "postdisaster": {
            "user_density_per_km2": cfg.postdisaster.user_density_per_km2,
            "curves": [
                {"label": c.label, "n_lap": c.n_lap, "n_hap": c.n_hap, "n_sat": c.n_sat}
                for c in cfg.postdisaster.curves
            ],
        },
        "kcoverage": {
            "n_hap": cfg.kcoverage.n_hap,
            "n_lap": cfg.kcoverage.n_lap,
            "n_sat": cfg.kcoverage.n_sat,
            "ks": list(cfg.kcoverage.ks),
            "thresholds_db": list(cfg.kcoverage.thresholds_db),
        },
    }


def _toml_value(v) -> str:
    if isinstance(v, bool):  # pragma: no cover - no bool keys today
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        r = repr(v)
        if "e" not in r and "." not in r and "inf" not in r and "nan" not in r:
            r += ".0"
        return r
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {v!r}")


def write_config(cfg: ScenarioConfig) -> str:
    """Serialize a config back to TOML; load_config round-trips it."""
    doc = config_to_dict(cfg)
    lines = []
    for key in ("kind", "trials", "seed"):
        lines.append(f"{key} = {_toml_value(doc[key])}")

    def emit_table(name: str, table: dict):
        lines.append("")
        lines.append(f"[{name}]")
        for k, v in table.items():
            if not isinstance(v, (dict, list)) or (isinstance(v, list) and not any(isinstance(x, dict) for x in v)):
                lines.append(f"{k} = {_toml_value(v)}")
        for k, v in table.items():
            if isinstance(v, dict):
                emit_table(f"{name}.{k}", v)
            elif isinstance(v, list) and any(isinstance(x, dict) for x in v):
                for item in v:
                    lines.append("")
                    lines.append(f"[[{name}.{k}]]")
                    for ik, iv in item.items():
                        lines.append(f"{ik} = {_toml_value(iv)}")

    for name in ("geometry", "noise", "radio", "remote", "postdisaster", "kcoverage"):
        emit_table(name, doc[name])
    return "\n".join(lines) + "\n"


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply dotted key=value overrides to a raw config document."""
    out = json.loads(json.dumps(doc))  # deep copy of plain data
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        try:
            value = tomllib.loads(f"v = {raw.strip()}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw.strip()
        node = out
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {key!r}: {p} is not a table")
        node[parts[-1]] = value
    return out


def config_schema_text() -> str:
    """Human-readable description of the full config schema."""

    def walk(schema, path, out):
        if isinstance(schema, dict):
            for k, v in schema.items():
                walk(v, f"{path}.{k}" if path else k, out)
        elif isinstance(schema, list):
            inner = schema[0]
            if isinstance(inner, dict):
                for k, v in inner.items():
                    walk(v, f"{path}[].{k}", out)
            else:
                out.append(f"{path} : list of {inner.__name__}")
        else:
            out.append(f"{path} : {schema.__name__}")

    out: list[str] = []
    walk(_SCHEMA, "", out)
    header = [
        "Scenario configuration schema (TOML).",
        "Required keys: kind (remote|postdisaster|kcoverage), trials, seed.",
        "All other keys are optional and default to the values of the",
        "shipped golden configs.  Dotted paths below are also the override",
        "and sweep vocabulary of the CLI.",
        "",
    ]
    return "\n".join(header + out) + "\n"


# --- result tables -----------------------------------------------------------


@dataclass
class ResultTable:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple]
    formats: tuple[str, ...]
    flags: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(f.format(v) for f, v in zip(self.formats, row)))
        return "\n".join(lines) + "\n"

    def json_obj(self):
        return {
            "name": self.name,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "flags": self.flags,
        }


@dataclass
class ScenarioResult:
    tables: list[ResultTable]
    manifest: dict


# --- trial batch runners (module-level so they pickle for workers) -----------


def _remote_batch(cfg: ScenarioConfig, start: int, stop: int) -> np.ndarray:
    """Per trial: index of the first satellite / first HAP (in sampling
    order) inside the common LoS region, or a sentinel when none is."""
    max_sat = max(cfg.remote.n_sat)
    max_hap = max(cfg.remote.n_hap)
    user_cap, hap_cap, bs = cfg.user_cap, cfg.hap_cap, cfg.bs_point
    sat_r = cfg.geometry.sat_radius_km
    out = np.empty((stop - start, 2), dtype=np.int32)
    for j, t in enumerate(range(start, stop)):
        rng = trial_rng(cfg.seed, "remote", t)
        user = sample_cap_point(user_cap, rng)
        sats = sample_bpp_sphere(max_sat, sat_r, rng, radio=cfg.sat_radio)
        haps = sample_bpp_cap(max_hap, hap_cap, rng, radio=cfg.hap_radio)
        for col, cons in enumerate((sats, haps)):
            hits = np.flatnonzero(common_los_mask(cons.positions, user, bs))
            out[j, col] = hits[0] if len(hits) else _INT_SENTINEL
    return out


def _postdisaster_batch(cfg: ScenarioConfig, curve_index: int, start: int, stop: int) -> np.ndarray:
    """Per trial: (serving tier code or -1, capacity bit/s, EE bit/J)."""
    curve = cfg.postdisaster.curves[curve_index]
    geo = cfg.geometry
    hap_cap = cfg.hap_cap
    tx_power_w = {t: cfg.radio(t).tx_power_w for t in Tier}
    out = np.empty((stop - start, 3))
    for j, t in enumerate(range(start, stop)):
        rng = trial_rng(cfg.seed, f"postdisaster/{curve.label}", t)
        user = sample_disk_point(geo.disk_radius_km, rng)
        laps = sample_ppp_disk(
            0.0, geo.disk_radius_km, geo.lap_altitude_m, rng, n=curve.n_lap, radio=cfg.lap_radio
        )
        haps = sample_bpp_cap(curve.n_hap, hap_cap, rng, radio=cfg.hap_radio)
        sats = sample_bpp_sphere(curve.n_sat, geo.sat_radius_km, rng, radio=cfg.sat_radio)
        cons = concat([laps, haps, sats])
        sid = associate(user, cons)
        if sid is None:
            out[j] = (-1.0, np.nan, np.nan)
            continue
        idx = np.array([sid])
        gain = draw_fading(cons, idx, rng)
        snr_db = _snr_samples(user, cons, idx, gain, cfg.noise)[0]
        bw = cons.bandwidth_hz[sid]
        capacity = bw * math.log2(1.0 + 10.0 ** (snr_db / 10.0))
        tier = Tier(int(cons.tiers[sid]))
        out[j] = (float(tier), capacity, capacity / tx_power_w[tier])
    return out


def _kcoverage_batch(cfg: ScenarioConfig, start: int, stop: int) -> np.ndarray:
    """Per trial: number of visible platforms above each SNR threshold."""
    kc = cfg.kcoverage
    geo = cfg.geometry
    thresholds = np.asarray(kc.thresholds_db)
    user_cap, hap_cap, lap_cap = cfg.user_cap, cfg.hap_cap, cfg.lap_cap
    out = np.zeros((stop - start, len(thresholds)), dtype=np.int32)
    from .geom import visible_mask

    for j, t in enumerate(range(start, stop)):
        rng = trial_rng(cfg.seed, "kcoverage", t)
        user = sample_cap_point(user_cap, rng)
        haps = sample_bpp_cap(kc.n_hap, hap_cap, rng, radio=cfg.hap_radio)
        laps = sample_bpp_cap(kc.n_lap, lap_cap, rng, tier=Tier.LAP, radio=cfg.lap_radio)
        sats = sample_bpp_sphere(kc.n_sat, geo.sat_radius_km, rng, radio=cfg.sat_radio)
        cons = concat([haps, laps, sats])
        mask = visible_mask(user, cons.positions)
        if not mask.any():
            continue
        idx = np.flatnonzero(mask)
        gains = draw_fading(cons, idx, rng)
        snrs = _snr_samples(user, cons, idx, gains, cfg.noise)
        out[j] = (snrs[:, None] >= thresholds[None, :]).sum(axis=0)
    return out


def _run_batches(batch_fn: Callable[[int, int], np.ndarray], trials: int, workers: int) -> np.ndarray:
    """Run fn over [0, trials) in fixed-index chunks; results are in trial
    order, so the concatenation is independent of the worker count."""
    if workers <= 1:
        return batch_fn(0, trials)
    chunk = max(1, math.ceil(trials / (workers * 4)))
    starts = list(range(0, trials, chunk))
    stops = [min(s + chunk, trials) for s in starts]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(batch_fn, starts, stops))
    return np.concatenate(parts)


# --- scenario runners --------------------------------------------------------


def scenario_remote(cfg: ScenarioConfig, workers: int = 1) -> ResultTable:
    """Relay availability over the (n_sat, n_hap) grid, with per-trial
    prefix coupling so the grid is monotone under common random numbers."""
    firsts = _run_batches(partial(_remote_batch, cfg), cfg.trials, workers)
    rows = []
    for ns in cfg.remote.n_sat:
        for nh in cfg.remote.n_hap:
            ok = (firsts[:, 0] < ns) | (firsts[:, 1] < nh)
            est = probability_estimate(int(ok.sum()), cfg.trials)
            rows.append((ns, nh, cfg.trials, est.value, est.ci_low, est.ci_high))
    return ResultTable(
        "availability",
        ("n_sat", "n_hap", "trials", "availability", "ci_low", "ci_high"),
        rows,
        ("{:d}", "{:d}", "{:d}", "{:.6f}", "{:.6f}", "{:.6f}"),
    )


def post_disaster_samples(cfg: ScenarioConfig, workers: int = 1) -> dict[str, np.ndarray]:
    """Raw per-trial (tier, capacity, EE) samples for every curve label."""
    out = {}
    for i, curve in enumerate(cfg.postdisaster.curves):
        out[curve.label] = _run_batches(
            partial(_postdisaster_batch, cfg, i), cfg.trials, workers
        )
    return out


_CDF_POINTS = 512
_TIER_NAMES = {Tier.LAP: "lap", Tier.HAP: "hap", Tier.SAT: "sat"}


def _cdf_table(name: str, value_col: str, samples: dict[str, np.ndarray], col: int) -> ResultTable:
    qs = np.linspace(0.0, 1.0, _CDF_POINTS)
    rows = []
    flags = {}
    for label, data in samples.items():
        served = data[data[:, 0] >= 0]
        if len(served) == 0:
            flags[label] = "no coverage"
            continue
        for tier in (Tier.LAP, Tier.HAP, Tier.SAT):
            vals = served[served[:, 0] == float(tier), col]
            if len(vals) == 0:
                continue
            points = np.quantile(vals, qs)
            for q, v in zip(qs, points):
                rows.append((label, _TIER_NAMES[tier], v, q))
    return ResultTable(
        name,
        ("label", "tier", value_col, "cdf"),
        rows,
        ("{}", "{}", "{:.8e}", "{:.8f}"),
        flags,
    )


def scenario_post_disaster(
    cfg: ScenarioConfig, workers: int = 1, samples: Optional[dict[str, np.ndarray]] = None
) -> tuple[ResultTable, ResultTable]:
    """Empirical capacity and energy-efficiency CDFs per curve and tier."""
    if samples is None:
        samples = post_disaster_samples(cfg, workers)
    capacity = _cdf_table("capacity_cdf", "capacity_bps", samples, 1)
    ee = _cdf_table("ee_cdf", "ee_bits_per_joule", samples, 2)
    return capacity, ee


def scenario_k_coverage(cfg: ScenarioConfig, workers: int = 1) -> ResultTable:
    """k-coverage probability per (threshold, k), common random numbers
    across thresholds and k values."""
    counts = _run_batches(partial(_kcoverage_batch, cfg), cfg.trials, workers)
    rows = []
    for k in cfg.kcoverage.ks:
        for i, thr in enumerate(cfg.kcoverage.thresholds_db):
            est = probability_estimate(int((counts[:, i] >= k).sum()), cfg.trials)
            rows.append((thr, k, est.value, est.ci_low, est.ci_high))
    return ResultTable(
        "kcoverage",
        ("threshold_db", "k", "probability", "ci_low", "ci_high"),
        rows,
        ("{:.6g}", "{:d}", "{:.6f}", "{:.6f}", "{:.6f}"),
    )


def run_scenario(cfg: ScenarioConfig, workers: int = 1) -> ScenarioResult:
    """Run the configured scenario and collect tables plus a run manifest."""
    t0 = time.monotonic()
    flags = {}
    if cfg.kind == "remote":
        tables = [scenario_remote(cfg, workers)]
        trial_count = cfg.trials
    elif cfg.kind == "postdisaster":
        cap, ee = scenario_post_disaster(cfg, workers)
        tables = [cap, ee]
        flags = cap.flags
        trial_count = cfg.trials * len(cfg.postdisaster.curves)
    elif cfg.kind == "kcoverage":
        tables = [scenario_k_coverage(cfg, workers)]
        trial_count = cfg.trials
    else:  # pragma: no cover - rejected at construction
        raise ConfigError(f"kind: unknown scenario {cfg.kind!r}")
    manifest = {
        "version": __version__,
        "kind": cfg.kind,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "trials_run": trial_count,
        "wall_time_s": round(time.monotonic() - t0, 3),
        "flags": flags,
        "config": config_to_dict(cfg),
    }
    return ScenarioResult(tables, manifest)


def write_results(result: ScenarioResult, out_dir, fmt: str = "csv") -> list[str]:
    """Write each table plus manifest.json into `out_dir`; returns paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for table in result.tables:
        if fmt == "csv":
            path = os.path.join(out_dir, f"{table.name}.csv")
            with open(path, "w", newline="\n") as f:
                f.write(table.csv_text())
        elif fmt == "json":
            path = os.path.join(out_dir, f"{table.name}.json")
            with open(path, "w", newline="\n") as f:
                json.dump(table.json_obj(), f, indent=2)
                f.write("\n")
        else:
            raise ConfigError(f"format: must be 'csv' or 'json', got {fmt!r}")
        paths.append(path)
    mpath = os.path.join(out_dir, "manifest.json")
    with open(mpath, "w", newline="\n") as f:
        json.dump(result.manifest, f, indent=2)
        f.write("\n")
    paths.append(mpath)
    return paths
