import numpy as np
import pytest

from belldiag.states import tetrahedron_grid


@pytest.fixture(scope="session")
def grid_points():
    """The standard 364-point probability lattice."""
    return tetrahedron_grid(11)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_density(rng, dim=4):
    """Full-rank random density matrix (Ginibre)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real
