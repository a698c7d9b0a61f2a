import numpy as np
import pytest

from siegel_reduce.cone import lorentz, orthant, product
from siegel_reduce.reduce import Subspace
from siegel_reduce.tube import TubePoint

CONE_FAMILIES = [
    lorentz(1), lorentz(2), lorentz(3), lorentz(4),
    orthant(2), orthant(3),
    product([lorentz(1), orthant(2)]),
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def plane():
    """lorentz(1) in R^2 with coordinates (w0, w1)."""
    return lorentz(1)


@pytest.fixture
def vertical_line():
    """H = span{(0, 1)}: admissible for lorentz(1)."""
    return Subspace.from_columns([[0.0, 1.0]], 2)


@pytest.fixture
def diagonal_line():
    """H = span{(1, 1)}: contains a boundary ray of lorentz(1)."""
    return Subspace.from_columns([[1.0, 1.0]], 2)


@pytest.fixture
def worked_point(plane):
    return TubePoint([0.0, 0.0], [2.0, 1.0], plane)
