import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("default")


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between an empirical sample and a CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    lo = np.arange(n) / n
    hi = np.arange(1, n + 1) / n
    return float(max(np.max(np.abs(f - lo)), np.max(np.abs(f - hi))))


@pytest.fixture
def table2():
    from leosec.config import table2_config
    return table2_config()
