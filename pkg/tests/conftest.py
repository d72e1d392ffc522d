import numpy as np
import pytest

from kgsplit import ModelParams, SpectralField, StateU, TorusGrid


def random_field(grid: TorusGrid, rng, scale: float = 1.0) -> SpectralField:
    vals = rng.standard_normal(grid.modes) + 1j * rng.standard_normal(grid.modes)
    return SpectralField.from_values(grid, scale * vals)


def random_state(grid: TorusGrid, rng, params=None, scale: float = 1.0) -> StateU:
    return StateU(random_field(grid, rng, scale), 0.0, params or ModelParams())


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


@pytest.fixture
def params():
    return ModelParams(m=1.0, lam=-1.0)
