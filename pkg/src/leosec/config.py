"""Scenario description and its JSON schema.

A scenario is a multi-tier constellation above a field of ground devices:
one tier is the serving (legitimate) tier, every other tier is treated as a
population of potential eavesdroppers.  ``table2_config`` returns the
built-in default scenario used throughout the test suite.

The JSON schema encodes units in key names.  Human-written configs may give
radio quantities in dB units (``tx_power_dbm``, ``antenna_gain_dbi``,
``noise_density_dbm_per_hz``, ``beta_ls_db``, ``beta_es_db``); serialized
configs use the linear keys (``tx_power_w``, ...) so that a dump/parse
round trip reproduces the config exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import FadingParams, RadioParams, dbm_to_watts, db_to_linear, noise_power
from .geometry import EARTH_RADIUS_KM, TierGeometry, tier_geometry


class ConfigError(ValueError):
    """Schema or invariant violation; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class Tier:
    altitude_km: float
    num_satellites: int


@dataclass(frozen=True)
class NetworkConfig:
    """Full scenario: constellation tiers, beam, radio, fading, thresholds."""

    earth_radius_km: float
    tiers: tuple[Tier, ...]
    legit_tier: int                  # index into tiers (0-based)
    theta_beam: float                # half beamwidth, rad
    device_density_per_km2: float
    radio: RadioParams
    fading: FadingParams
    beta_ls: float                   # serving-link SINR threshold, linear
    beta_es: float                   # eavesdropper SINR threshold, linear

    def __post_init__(self):
        if not (math.isfinite(self.earth_radius_km) and self.earth_radius_km > 0.0):
            raise ConfigError("earth_radius_km", f"must be positive, got {self.earth_radius_km}")
        if len(self.tiers) < 1:
            raise ConfigError("tiers", "at least one tier is required")
        for i, t in enumerate(self.tiers):
            if not (math.isfinite(t.altitude_km) and t.altitude_km > 0.0):
                raise ConfigError(f"tiers[{i}].altitude_km", f"must be positive, got {t.altitude_km}")
            if t.num_satellites < 0 or t.num_satellites != int(t.num_satellites):
                raise ConfigError(f"tiers[{i}].num_satellites",
                                  f"must be a nonnegative integer, got {t.num_satellites}")
        if not 0 <= self.legit_tier < len(self.tiers):
            raise ConfigError("legit_tier",
                              f"must index tiers (0..{len(self.tiers) - 1}), got {self.legit_tier}")
        if not 0.0 < self.theta_beam <= math.pi / 2.0:
            raise ConfigError("theta_beam", f"must be in (0, pi/2], got {self.theta_beam}")
        if not (math.isfinite(self.device_density_per_km2)
                and self.device_density_per_km2 >= 0.0):
            raise ConfigError("device_density_per_km2",
                              f"must be finite and nonnegative, got {self.device_density_per_km2}")
        if not (math.isfinite(self.beta_ls) and self.beta_ls > 0.0):
            raise ConfigError("beta_ls", f"must be positive, got {self.beta_ls}")
        if not (math.isfinite(self.beta_es) and self.beta_es > 0.0):
            raise ConfigError("beta_es", f"must be positive, got {self.beta_es}")

    def tier_geometries(self) -> tuple[TierGeometry, ...]:
        return tuple(
            tier_geometry(t.altitude_km, t.num_satellites, self.theta_beam, self.earth_radius_km)
            for t in self.tiers)

    def legit_geometry(self) -> TierGeometry:
        return self.tier_geometries()[self.legit_tier]

    @property
    def noise_w(self) -> float:
        return noise_power(self.radio.noise_density_w_per_hz, self.radio.bandwidth_hz)


def table2_config() -> NetworkConfig:
    """Default three-tier scenario (tiers at 500/1000/1500 km, 500 satellites
    each, pi/3 half beamwidth; the 1000 km tier serves)."""
    return NetworkConfig(
        earth_radius_km=EARTH_RADIUS_KM,
        tiers=(Tier(500.0, 500), Tier(1000.0, 500), Tier(1500.0, 500)),
        legit_tier=1,
        theta_beam=math.pi / 3.0,
        device_density_per_km2=1e-6,
        radio=RadioParams(
            carrier_hz=2e9,
            tx_power_w=dbm_to_watts(23.0),
            antenna_gain_linear=db_to_linear(41.9),
            noise_density_w_per_hz=dbm_to_watts(-174.0),
            bandwidth_hz=180e3,
            info_ratio=0.1,
        ),
        fading=FadingParams(shape_m1=1, scale_m2=0.1269),
        beta_ls=db_to_linear(-30.0),
        beta_es=db_to_linear(-10.0),
    )


PRESETS = {"table2": table2_config}

# (linear key, dB-unit key, converter) for each radio-ish scalar that may be
# written in either unit system.
_DUAL_UNIT_KEYS = (
    ("tx_power_w", "tx_power_dbm", dbm_to_watts),
    ("antenna_gain_linear", "antenna_gain_dbi", db_to_linear),
    ("noise_density_w_per_hz", "noise_density_dbm_per_hz", dbm_to_watts),
    ("beta_ls", "beta_ls_db", db_to_linear),
    ("beta_es", "beta_es_db", db_to_linear),
)


def _get_number(d: dict, key: str) -> float:
    if key not in d:
        raise ConfigError(key, "missing required field")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(key, f"must be finite, got {v}")
    return float(v)


def _get_dual(d: dict, linear_key: str, db_key: str, convert) -> float:
    if linear_key in d and db_key in d:
        raise ConfigError(linear_key, f"give either {linear_key} or {db_key}, not both")
    if db_key in d:
        return convert(_get_number(d, db_key))
    return _get_number(d, linear_key)


def config_from_dict(d: dict) -> NetworkConfig:
    """Build and validate a NetworkConfig from parsed JSON."""
    if not isinstance(d, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {"earth_radius_km", "tiers", "legit_tier", "theta_beam_rad",
             "device_density_per_km2", "carrier_hz", "bandwidth_hz", "info_ratio",
             "fading_shape_m1", "fading_scale_m2"}
    known.update(k for pair in _DUAL_UNIT_KEYS for k in pair[:2])
    for key in d:
        if key not in known:
            raise ConfigError(key, "unknown field")

    if "tiers" not in d:
        raise ConfigError("tiers", "missing required field")
    raw_tiers = d["tiers"]
    if not isinstance(raw_tiers, list) or not raw_tiers:
        raise ConfigError("tiers", "must be a non-empty list of objects")
    tiers = []
    for i, t in enumerate(raw_tiers):
        if not isinstance(t, dict):
            raise ConfigError(f"tiers[{i}]", "must be an object")
        alt = _get_number(t, "altitude_km")
        n = _get_number(t, "num_satellites")
        if n != int(n):
            raise ConfigError(f"tiers[{i}].num_satellites", f"must be an integer, got {n}")
        tiers.append(Tier(altitude_km=alt, num_satellites=int(n)))

    legit = _get_number(d, "legit_tier")
    if legit != int(legit):
        raise ConfigError("legit_tier", f"must be an integer, got {legit}")

    dual = {lin: _get_dual(d, lin, db, conv) for lin, db, conv in _DUAL_UNIT_KEYS}
    try:
        radio = RadioParams(
            carrier_hz=_get_number(d, "carrier_hz"),
            tx_power_w=dual["tx_power_w"],
            antenna_gain_linear=dual["antenna_gain_linear"],
            noise_density_w_per_hz=dual["noise_density_w_per_hz"],
            bandwidth_hz=_get_number(d, "bandwidth_hz"),
            info_ratio=_get_number(d, "info_ratio"),
        )
        fading = FadingParams(
            shape_m1=int(_get_number(d, "fading_shape_m1")),
            scale_m2=_get_number(d, "fading_scale_m2"),
        )
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError("radio", str(e)) from e
    return NetworkConfig(
        earth_radius_km=_get_number(d, "earth_radius_km"),
        tiers=tuple(tiers),
        legit_tier=int(legit),
        theta_beam=_get_number(d, "theta_beam_rad"),
        device_density_per_km2=_get_number(d, "device_density_per_km2"),
        radio=radio,
        fading=fading,
        beta_ls=dual["beta_ls"],
        beta_es=dual["beta_es"],
    )


def config_to_dict(cfg: NetworkConfig) -> dict:
    """Serialize with linear-unit keys; parsing the result reproduces cfg."""
    return {
        "earth_radius_km": cfg.earth_radius_km,
        "tiers": [{"altitude_km": t.altitude_km, "num_satellites": t.num_satellites}
                  for t in cfg.tiers],
        "legit_tier": cfg.legit_tier,
        "theta_beam_rad": cfg.theta_beam,
        "device_density_per_km2": cfg.device_density_per_km2,
        "carrier_hz": cfg.radio.carrier_hz,
        "tx_power_w": cfg.radio.tx_power_w,
        "antenna_gain_linear": cfg.radio.antenna_gain_linear,
        "noise_density_w_per_hz": cfg.radio.noise_density_w_per_hz,
        "bandwidth_hz": cfg.radio.bandwidth_hz,
        "info_ratio": cfg.radio.info_ratio,
        "fading_shape_m1": cfg.fading.shape_m1,
        "fading_scale_m2": cfg.fading.scale_m2,
        "beta_ls": cfg.beta_ls,
        "beta_es": cfg.beta_es,
    }


def with_parameter(cfg: NetworkConfig, name: str, value: float) -> NetworkConfig:
    """Copy of cfg with one sweepable parameter replaced.

    Sweepable names: gamma (message power share), theta_beam, altitude_m
    (altitude of the legitimate tier, km), num_satellites (all tiers),
    device_density, legit_tier, beta_ls, beta_es (linear thresholds).
    """
    if name == "gamma":
        return replace(cfg, radio=replace(cfg.radio, info_ratio=float(value)))
    if name == "theta_beam":
        return replace(cfg, theta_beam=float(value))
    if name == "altitude_m":
        tiers = list(cfg.tiers)
        tiers[cfg.legit_tier] = replace(tiers[cfg.legit_tier], altitude_km=float(value))
        return replace(cfg, tiers=tuple(tiers))
    if name == "num_satellites":
        tiers = tuple(replace(t, num_satellites=int(value)) for t in cfg.tiers)
        return replace(cfg, tiers=tiers)
    if name == "device_density":
        return replace(cfg, device_density_per_km2=float(value))
    if name == "legit_tier":
        return replace(cfg, legit_tier=int(value))
    if name == "beta_ls":
        return replace(cfg, beta_ls=float(value))
    if name == "beta_es":
        return replace(cfg, beta_es=float(value))
    raise ConfigError(name, "unknown sweepable parameter")


SWEEPABLE_PARAMETERS = ("gamma", "theta_beam", "altitude_m", "num_satellites",
                        "device_density", "legit_tier", "beta_ls", "beta_es")
