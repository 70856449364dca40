"""Uplink security metrics for IoT-to-LEO links in multi-tier constellations.

Closed-form stochastic-geometry expressions for availability, coverage,
successful-communication, secrecy-outage, and secure-communication
probabilities, with a Monte Carlo simulator as an independent oracle.
"""
from .analytics import (DEFAULT_QUAD, MetricsReport, QuadratureSpec, full_report,
                        secure_probability)
from .channel import FadingParams, RadioParams
from .config import NetworkConfig, Tier, table2_config
from .experiments import SweepSpec, optimize_gamma, sweep, validate
from .geometry import TierGeometry
from .montecarlo import McEstimate, estimate, estimate_laplace

__all__ = [
    "DEFAULT_QUAD", "FadingParams", "McEstimate", "MetricsReport", "NetworkConfig",
    "QuadratureSpec", "RadioParams", "SweepSpec", "Tier", "TierGeometry",
    "estimate", "estimate_laplace", "full_report", "optimize_gamma",
    "secure_probability", "sweep", "table2_config", "validate",
]
