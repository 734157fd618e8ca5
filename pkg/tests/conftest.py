import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = arrays(np.float64, (4,), elements=finite)
unit_quats = quats.filter(lambda q: np.linalg.norm(q) > 1e-2).map(lambda q: q / np.linalg.norm(q))
vectors = arrays(np.float64, (3, 4), elements=finite).filter(lambda v: np.linalg.norm(v) > 1e-2)
seeds = st.integers(0, 2 ** 32 - 1)


def well_conditioned(rng, shift=4.0):
    """Random quaternionic matrix kept away from singularity by a real diagonal shift."""
    A = rng.standard_normal((3, 3, 4))
    A[np.arange(3), np.arange(3), 0] += shift
    return A


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
