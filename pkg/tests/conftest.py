import numpy as np
import pytest
from hypothesis import strategies as st

from coinwalk import CoinState2, CoinState4


def random_density(dim, rng, rank=None):
    """Random density matrix A A^dagger / tr, optionally rank-deficient."""
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@st.composite
def coin2_states(draw):
    p1 = draw(st.floats(0.0, 1.0))
    frac = draw(st.floats(0.0, 1.0))
    phase = draw(st.floats(-np.pi, np.pi))
    radius = frac * np.sqrt(p1 * (1.0 - p1))
    return CoinState2(p1, 1.0 - p1, radius * np.exp(1j * phase))


@st.composite
def coin4_states(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rank = draw(st.integers(1, 4))
    rng = np.random.default_rng(seed)
    return CoinState4.from_matrix(random_density(4, rng, rank))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def mixed2():
    return CoinState2.maximally_mixed()
