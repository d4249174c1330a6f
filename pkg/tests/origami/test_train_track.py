from fractions import Fraction

import pytest

from backend.core.models import Stratum
from backend.origami.cylinder import decompose, parse_diagram_text
from backend.origami.enumeration import census
from backend.origami.surface import surface_from_code
from backend.origami.train_track import build_chart


@pytest.fixture
def torus_chart():
    return build_chart(parse_diagram_text("top: e1 | bottom: e1 ; a=1"))


def test_torus_chart(torus_chart):
    assert torus_chart.variables == ("u1", "e1")
    assert torus_chart.equalities == ()
    assert torus_chart.area == (Fraction(0), Fraction(1))
    assert torus_chart.dimension == 2


def test_torus_cone(torus_chart):
    assert torus_chart.in_cone((1, 1))
    assert torus_chart.in_cone((1, 3))
    assert not torus_chart.in_cone((0, 3))
    assert not torus_chart.in_cone((4, 3))
    assert not torus_chart.in_cone((1, 0))


def test_params_point_round_trip(torus_chart):
    params = torus_chart.params_of((2, 5))
    assert params.widths == (5,)
    assert params.twists == (2,)
    assert torus_chart.point_of(params) == (2, 5)
    assert torus_chart.norm((2, 5)) == 7


def test_lp_text(torus_chart):
    text = torus_chart.to_lp_text()
    assert "Subject To" in text
    assert " area: e1" in text
    assert "twist_u1_max: -u1 + e1 >= 0" in text
    assert text.endswith("End")


def test_area_matches_surfaces():
    for record in census(5, Stratum((4,), 1)).records:
        diagram, params = decompose(surface_from_code(record.code))
        chart = build_chart(diagram)
        point = chart.point_of(params)
        assert chart.in_cone(point)
        assert chart.evaluate_area(point) == record.area
        assert chart.dimension == diagram.dimension() == 4
