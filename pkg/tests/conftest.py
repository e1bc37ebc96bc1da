import numpy as np
import pytest

from sec_transfer.fixtures import ladder_spectrum, random_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


@pytest.fixture
def two_qubit_spec():
    return ladder_spectrum(2, 2)


@pytest.fixture
def qutrit_qubit_spec():
    return ladder_spectrum(3, 2)


def random_pair(spec, rng, coherent=True):
    """Convenience: a random state over a spectrum's dimensions."""
    return random_state(spec.dims, rng, coherent=coherent)
