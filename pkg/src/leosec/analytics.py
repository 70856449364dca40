"""Closed-form metric engine.

Five probabilities describe one uplink scenario:

* availability: at least one serving-tier satellite is inside the device's
  visibility cap;
* coverage: the serving link clears its SINR threshold (jointly with being
  in view, via the nearest-satellite angle law);
* successful communication: availability times coverage;
* secrecy outage: every eavesdropper in every other tier stays below its
  SINR threshold;
* secure communication: successful communication times secrecy outage.

Interference from other ground devices enters through the Laplace transform
of the aggregate interference power at a receiver, E[exp(-s * I)].  For a
Poisson field of devices on the receiver's visibility cap with the Gamma
channel-gain law, the transform reduces to a single smooth integral over the
central angle, which is evaluated with a composite Gauss-Legendre rule.

Coverage and outage integrate a conditional SINR-threshold probability -- a
finite alternating binomial sum in the fading shape -- against the relevant
contact-angle density.  Every integral here is 1-D on a bounded interval
with a smooth integrand, so the fixed-node composite rule with one
panel-doubling convergence check is both fast and reliable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import path_gain
from .config import NetworkConfig
from .geometry import TierGeometry, central_angle_to_distance, contact_angle_cdf, contact_angle_pdf

_MAX_PANEL_DOUBLINGS = 6
_BRACKET_SLACK = 1e-12


class QuadratureError(ArithmeticError):
    """Panel refinement failed to converge within the doubling budget."""


class ANCeilingError(ValueError):
    """Eavesdropper SINR threshold exceeds the jamming-imposed ceiling.

    When info_ratio <= beta_es / (1 + beta_es), no eavesdropper can ever
    reach beta_es (its SINR is capped below info_ratio / (1 - info_ratio)),
    so the secrecy-outage probability is exactly 1 and the eavesdropper
    scaling factor is undefined.
    """


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_panel: int = 64
    panels: int = 4
    rel_tolerance: float = 1e-8

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise ValueError(f"nodes_per_panel must be >= 2, got {self.nodes_per_panel}")
        if self.panels < 1:
            raise ValueError(f"panels must be >= 1, got {self.panels}")
        if not self.rel_tolerance > 0.0:
            raise ValueError(f"rel_tolerance must be positive, got {self.rel_tolerance}")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=8)
def _gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _composite(f, lo: float, hi: float, nodes_per_panel: int, panels: int):
    x, w = _gl_nodes(nodes_per_panel)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = (half[:, None] * x[None, :] + mid[:, None]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    vals = np.asarray(f(pts), dtype=float)
    return vals @ weights


def integrate(f, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUAD):
    """Composite Gauss-Legendre integral of f over [lo, hi].

    ``f`` must accept an ndarray of evaluation points and return values with
    the points on the last axis (so vector-valued integrands work).  Panels
    are doubled until two successive estimates agree to ``rel_tolerance``;
    a QuadratureError is raised if that never happens.
    """
    if lo > hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return 0.0
    prev = _composite(f, lo, hi, spec.nodes_per_panel, spec.panels)
    panels = spec.panels
    for _ in range(_MAX_PANEL_DOUBLINGS):
        panels *= 2
        cur = _composite(f, lo, hi, spec.nodes_per_panel, panels)
        err = np.max(np.abs(cur - prev))
        if err <= spec.rel_tolerance * max(float(np.max(np.abs(cur))), 1e-30):
            return cur
        prev = cur
    raise QuadratureError(
        f"integral on [{lo}, {hi}] did not stabilize within {spec.rel_tolerance} "
        f"after {panels} panels")


def availability_probability(tier: TierGeometry) -> float:
    """Probability that at least one tier satellite is inside the cap."""
    return float(contact_angle_cdf(tier.max_central_angle, tier.num_satellites,
                                   tier.max_central_angle))


def interference_laplace(s, tier: TierGeometry, cfg: NetworkConfig,
                         quad: QuadratureSpec = DEFAULT_QUAD):
    """E[exp(-s * I)] for the device-field interference at one receiver.

    The receiver sees a Poisson device field on its visibility cap; averaging
    the per-device factor over the Gamma gain law and the cap area gives

        exp(-lambda * 2*pi*Re^2 * integral_0^theta_max
            [1 - (1 + m2*s*P*G*pg(d(theta)))^(-m1)] sin(theta) dtheta)

    with pg the free-space power gain at the slant distance d(theta).
    Accepts a scalar or ndarray ``s`` (1/W); returns a value in (0, 1].
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0.0):
        raise ValueError("s must be nonnegative")
    radio, fading = cfg.radio, cfg.fading
    coef = fading.scale_m2 * radio.tx_power_w * radio.antenna_gain_linear

    def integrand(theta):
        d = central_angle_to_distance(theta, tier.shell_radius_km, cfg.earth_radius_km)
        base = coef * path_gain(d, radio.carrier_hz)
        x = s_arr[:, None] * base[None, :]
        return (1.0 - (1.0 + x) ** (-fading.shape_m1)) * np.sin(theta)[None, :]

    integral = integrate(integrand, 0.0, tier.max_central_angle, quad)
    area_coef = cfg.device_density_per_km2 * 2.0 * math.pi * cfg.earth_radius_km ** 2
    out = np.exp(-area_coef * integral)
    return float(out[0]) if np.ndim(s) == 0 else out


def s_ls(theta, cfg: NetworkConfig):
    """Exponent scaling for the serving link's threshold event at angle theta.

    The probability that the serving link exceeds its threshold, conditioned
    on angle and interference I, is a binomial sum in exp(-q * s_ls(theta) *
    (I + noise)); this returns that per-unit-power factor (1/W).
    """
    radio = cfg.radio
    if radio.info_ratio <= 0.0:
        raise ValueError("info_ratio must be positive to form the serving-link scaling")
    geom = cfg.legit_geometry()
    d = central_angle_to_distance(theta, geom.shell_radius_km, cfg.earth_radius_km)
    denom = radio.info_ratio * radio.tx_power_w * radio.antenna_gain_linear
    return cfg.fading.rate * cfg.beta_ls / (denom * path_gain(d, radio.carrier_hz))


def an_ceiling(info_ratio: float, beta_es: float) -> bool:
    """True when the jamming share caps eavesdropper SINR below beta_es."""
    return info_ratio - beta_es * (1.0 - info_ratio) <= 0.0


def s_es(theta, cfg: NetworkConfig, tier: TierGeometry):
    """Eavesdropper counterpart of s_ls for a satellite of the given tier.

    The uncancelled signal share shrinks the effective margin to
    info_ratio - beta_es * (1 - info_ratio); raises ANCeilingError when that
    margin is not positive (the threshold is unreachable).
    """
    radio = cfg.radio
    margin = radio.info_ratio - cfg.beta_es * (1.0 - radio.info_ratio)
    if margin <= 0.0:
        raise ANCeilingError(
            f"info_ratio {radio.info_ratio} is at or below the ceiling "
            f"beta_es/(1+beta_es) = {cfg.beta_es / (1.0 + cfg.beta_es)}")
    d = central_angle_to_distance(theta, tier.shell_radius_km, cfg.earth_radius_km)
    denom = margin * radio.tx_power_w * radio.antenna_gain_linear
    return cfg.fading.rate * cfg.beta_es / (denom * path_gain(d, radio.carrier_hz))


def _threshold_exceed_given_angle(s_vals, tier: TierGeometry, cfg: NetworkConfig,
                                  quad: QuadratureSpec) -> np.ndarray:
    """P[link SINR > threshold | angle], for the angle-dependent scalings
    ``s_vals``: alternating binomial sum over the fading shape, each term
    weighting the noise factor by the interference transform."""
    m1 = cfg.fading.shape_m1
    noise = cfg.noise_w
    acc = np.zeros_like(s_vals)
    for q in range(1, m1 + 1):
        term = math.comb(m1, q) * (-1.0) ** (q + 1)
        acc += term * np.exp(-q * s_vals * noise) * interference_laplace(q * s_vals, tier, cfg, quad)
    # the sum is a probability; clip rounding dust from the alternation
    return np.clip(acc, 0.0, 1.0)


def coverage_probability(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """P[serving link SINR > beta_ls], integrated over the nearest-satellite
    angle law of the serving tier (hence at most that tier's availability)."""
    geom = cfg.legit_geometry()
    if geom.num_satellites == 0 or cfg.radio.info_ratio == 0.0:
        return 0.0

    def integrand(theta):
        exceed = _threshold_exceed_given_angle(s_ls(theta, cfg), geom, cfg, quad)
        return exceed * contact_angle_pdf(theta, geom.num_satellites, geom.max_central_angle)

    return float(integrate(integrand, 0.0, geom.max_central_angle, quad))


def successful_probability(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Availability of the serving tier times its coverage probability."""
    return availability_probability(cfg.legit_geometry()) * coverage_probability(cfg, quad)


def secrecy_outage_probability(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """P[every eavesdropper in every non-serving tier stays below beta_es].

    Per tier, a single satellite's below-threshold probability is the cap
    integral of the conditional probability against the single-satellite
    angle density sin(theta)/2, plus the mass (1 + cos(theta_max))/2 of never
    being in view; independence across the tier's satellites raises that
    bracket to the satellite count (evaluated in log domain).
    """
    if an_ceiling(cfg.radio.info_ratio, cfg.beta_es):
        return 1.0
    log_total = 0.0
    for k, geom in enumerate(cfg.tier_geometries()):
        if k == cfg.legit_tier or geom.num_satellites == 0:
            continue

        def integrand(theta, geom=geom):
            exceed = _threshold_exceed_given_angle(s_es(theta, cfg, geom), geom, cfg, quad)
            return (1.0 - exceed) * np.sin(theta) / 2.0

        below = float(integrate(integrand, 0.0, geom.max_central_angle, quad))
        bracket = below + 0.5 * (1.0 + math.cos(geom.max_central_angle))
        if bracket < -_BRACKET_SLACK or bracket > 1.0 + _BRACKET_SLACK:
            raise ArithmeticError(f"per-satellite bracket {bracket} outside [0, 1]")
        bracket = min(max(bracket, 0.0), 1.0)
        if bracket == 0.0:
            return 0.0
        log_total += geom.num_satellites * math.log(bracket)
    return math.exp(log_total)


def secure_probability(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Successful-communication probability times secrecy-outage probability."""
    return successful_probability(cfg, quad) * secrecy_outage_probability(cfg, quad)


@dataclass(frozen=True)
class MetricsReport:
    """All five analytic metrics for one scenario."""

    p_av_per_tier: tuple[float, ...]
    p_cov: float
    p_suc: float
    p_out: float
    p_sec: float

    def __post_init__(self):
        for name in ("p_cov", "p_suc", "p_out", "p_sec"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        for i, v in enumerate(self.p_av_per_tier):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"p_av_per_tier[{i}] must be in [0, 1], got {v}")


def full_report(cfg: NetworkConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> MetricsReport:
    """Evaluate all metrics; p_suc and p_sec are exact products by construction."""
    p_av = tuple(availability_probability(g) for g in cfg.tier_geometries())
    p_cov = coverage_probability(cfg, quad)
    p_suc = p_av[cfg.legit_tier] * p_cov
    p_out = secrecy_outage_probability(cfg, quad)
    return MetricsReport(p_av_per_tier=p_av, p_cov=p_cov, p_suc=p_suc,
                         p_out=p_out, p_sec=p_suc * p_out)
