import numpy as np
import pytest

from qsim import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per available kernel backend."""
    prev = kernels.backend_name()
    kernels.use(request.param)
    yield request.param
    kernels.use(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, n_qubits):
    """Normalized random complex vector of 2^n amplitudes."""
    vec = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return (vec / np.linalg.norm(vec)).astype(np.complex128)
