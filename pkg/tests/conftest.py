import hypothesis
import numpy as np
import pytest

from qcovar.generators import random_density, random_hermitian

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def rand_problem(seed, n, k, rank=None):
    """Uncentered random density and observables."""
    rng = np.random.default_rng(seed)
    d = random_density(rng, n, n if rank is None else rank)
    xs = np.array([random_hermitian(rng, n) for _ in range(k)])
    return d, xs


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
