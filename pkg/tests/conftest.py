import numpy as np
import pytest

from indsum import (
    BorderlinePower,
    DeHaanPoly,
    DeHaanStretched,
    GinibreModel,
    KarlinModel,
    PowerLaw,
)


@pytest.fixture(scope="session")
def ginibre():
    return GinibreModel()


@pytest.fixture(scope="session")
def powerlaw_half():
    return PowerLaw(alpha=0.5)


@pytest.fixture(scope="session")
def karlin_half_j1(powerlaw_half):
    return KarlinModel(powerlaw_half, 1)


@pytest.fixture(scope="session")
def karlin_half_j2(powerlaw_half):
    return KarlinModel(powerlaw_half, 2)


@pytest.fixture(scope="session")
def borderline2():
    return BorderlinePower(log_exponent=2.0)


@pytest.fixture(scope="session")
def dehaan_poly1():
    return DeHaanPoly(beta=1.0)


@pytest.fixture(scope="session")
def dehaan_stretched():
    return DeHaanStretched(sigma=1.0, lam=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
