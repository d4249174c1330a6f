import math
from fractions import Fraction

import pytest

from backend.core.models import CountQuery
from backend.origami.cylinder import parse_diagram_text
from backend.origami.engines import DirectEngine, TrainTrackEngine
from backend.origami.engines.train_track import s_count, sq_tt_count
from backend.origami.enumeration import census
from backend.origami.multicurve import parse_type_token
from backend.origami.polyhedra import partition, poly_extrema
from backend.origami.train_track import build_chart


@pytest.fixture
def torus_chart():
    return build_chart(parse_diagram_text("top: e1 | bottom: e1 ; a=1"))


def test_torus_point_counts(torus_chart, torus_type):
    gamma = parse_type_token(torus_type)
    # Points (s, w) with 0 < s <= w
    assert sq_tt_count(torus_chart, None, 4, None) == 10
    # Vertical weight gcd(w, s) = 1: Euler's totient summed
    assert sq_tt_count(torus_chart, None, 4, gamma) == 6
    assert s_count(torus_chart, None, 4, None) == 4


def test_cells_split_the_count(torus_chart):
    cells = partition(torus_chart, Fraction(1, 4)).cells
    assert sum(sq_tt_count(torus_chart, cell, 6, None) for cell in cells) == sq_tt_count(torus_chart, None, 6, None)


def test_sandwich(torus_chart, torus_type):
    gamma = parse_type_token(torus_type)
    for cell in partition(torus_chart, Fraction(1, 2)).cells:
        m, big_m = poly_extrema(torus_chart, cell)
        for l_value in range(1, 9):
            for gamma1 in (None, gamma):
                lower = s_count(torus_chart, cell, math.floor(Fraction(l_value) / big_m), gamma1)
                upper = s_count(torus_chart, cell, math.floor(Fraction(l_value) / m), gamma1)
                assert lower <= sq_tt_count(torus_chart, cell, l_value, gamma1) <= upper


def test_torus_engine(torus_stratum, torus_type, store):
    query = CountQuery(stratum=torus_stratum, gamma1=torus_type, gamma2=torus_type, lmax=4)
    series = TrainTrackEngine(query, store).run()
    assert series.counts() == [1, 2, 4, 6]
    assert series.gamma2 == torus_type


def test_matches_direct_counts_for_every_pair(h2, store):
    pairs = sorted({(r.vertical, r.horizontal) for r in census(3, h2).records})
    for vertical, horizontal in pairs:
        query = CountQuery(stratum=h2, gamma1=vertical, gamma2=horizontal, lmax=6)
        assert TrainTrackEngine(query, store).run().points == DirectEngine(query, store).run().points


def test_any_vertical_type(torus_stratum, torus_type, store):
    query = CountQuery(stratum=torus_stratum, gamma2=torus_type, lmax=4)
    assert TrainTrackEngine(query, store).run().counts() == [1, 3, 6, 10]


def test_requires_gamma2(torus_stratum, torus_type):
    with pytest.raises(ValueError):
        TrainTrackEngine(CountQuery(stratum=torus_stratum, gamma1=torus_type)).run()
