import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# every property test draws at least this many instances
PROPERTY_EXAMPLES = 100

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_hermitian(rng, n, scale=1.0):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (A + A.conj().T) / 2


def random_sparse(rng, n, m, density=0.2):
    mask = rng.random((n, m)) < density
    vals = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    return np.where(mask, vals, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
