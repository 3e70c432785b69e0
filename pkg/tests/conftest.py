import numpy as np
import pytest

from trisqueeze.states import AmplitudeMode, Family, SamplerConfig, sample_amplitudes, states_from_amplitudes


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture(scope="session")
def complex_states():
    """300 random complex three-qubit states (fixed seed)."""
    cfg = SamplerConfig(seed=11, count=300, amplitude_mode=AmplitudeMode.COMPLEX)
    return states_from_amplitudes(Family.GENERAL, sample_amplitudes(Family.GENERAL, cfg))


def random_density(rng, dim=8, rank=3):
    """A random mixed density matrix of the given rank."""
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
