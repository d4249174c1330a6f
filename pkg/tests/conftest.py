import pytest

from backend.core.enums import Side
from backend.core.models import Stratum
from backend.origami.census_cache import CensusStore
from backend.origami.surface import from_cycle_strings, from_pairs, slot

@pytest.fixture
def torus():
    """The one-square torus, its single vertex marked."""
    return from_cycle_strings("(1)", "(1)")


@pytest.fixture
def l_origami():
    """Three squares in an L: squares 1 and 2 side by side, square 3 on top of square 1."""
    return from_cycle_strings("(1,2)(3)", "(1,3)(2)")


@pytest.fixture
def pillowcase():
    """Two squares forming a horizontal cylinder whose boundaries are folded in half."""
    pairs = [
        (slot(0, Side.RIGHT), slot(1, Side.LEFT)),
        (slot(1, Side.RIGHT), slot(0, Side.LEFT)),
        (slot(0, Side.BOTTOM), slot(1, Side.BOTTOM)),
        (slot(0, Side.TOP), slot(1, Side.TOP)),
    ]
    return from_pairs(2, pairs)


@pytest.fixture
def torus_type():
    return "V:g0p1b2;E:0-0w1"


@pytest.fixture
def torus_stratum():
    return Stratum((0,), 1)


@pytest.fixture
def h2():
    return Stratum((4,), 1)


@pytest.fixture
def store():
    return CensusStore(jobs=1)
