import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def well_conditioned(rng, m, n=None):
    """Random matrix with singular values in [1, 3]."""
    n = m if n is None else n
    u, _ = np.linalg.qr(rng.standard_normal((m, m)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    sv = rng.uniform(1.0, 3.0, min(m, n))
    d = np.zeros((m, n))
    d[np.arange(len(sv)), np.arange(len(sv))] = sv
    return u @ d @ v.T


def gram_target(n, alpha):
    g = np.full((n, n), alpha)
    np.fill_diagonal(g, 1.0)
    return g
