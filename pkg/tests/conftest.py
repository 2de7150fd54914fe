import numpy as np
import pytest

from uhlfid import StateSeed, random_density


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=[20260809, 0]))


def random_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) * (scale / 2.0)


def state_pair(n, master=1, trial=0, rank_rho=None, rank_sigma=None):
    rho = random_density(n, rank_rho or n, StateSeed(master, 2 * trial))
    sigma = random_density(n, rank_sigma or n, StateSeed(master, 2 * trial + 1))
    return rho, sigma
