import pytest

from backend.core.enums import ComponentFilter
from backend.core.errors import UnclassifiedComponent
from backend.core.models import ComponentTag, Stratum
from backend.origami.components import component_tag, spin_applicable
from backend.origami.enumeration import census
from backend.origami.surface import flip_squares, rotate90, surface_from_code


def test_l_origami_is_hyperelliptic_and_odd(l_origami):
    assert component_tag(l_origami) == ComponentTag(hyperelliptic=True, spin_parity=1)


def test_torus_has_no_spin(torus):
    tag = component_tag(torus)
    assert tag.hyperelliptic
    assert tag.spin_parity is None


def test_genus_zero_quadratic_is_classified(pillowcase):
    assert component_tag(pillowcase).classified


def test_tag_ignores_turned_squares(l_origami):
    assert component_tag(flip_squares(l_origami, {0, 2})) == component_tag(l_origami)


def test_spin_applicability():
    assert spin_applicable(2, (4,))
    assert not spin_applicable(2, (2, 2))
    assert not spin_applicable(1, ())


@pytest.mark.parametrize("text", ["H(2)", "H(1,1)"])
def test_genus_two_strata_are_hyperelliptic(text):
    # Both genus two strata are connected and hyperelliptic
    records = census(5, Stratum.from_text(text)).records
    assert records
    for record in records:
        assert record.tag.hyperelliptic
        assert record.tag.matches(ComponentFilter.HYP)


def test_h2_spin_is_odd():
    for record in census(4, Stratum.from_text("H(2)")).records:
        assert record.tag.spin_parity == 1


def test_rotation_preserves_tag():
    for record in census(4, Stratum.from_text("H(2)")).records:
        surface = surface_from_code(record.code)
        assert component_tag(rotate90(surface)) == record.tag


def test_unclassified_quadratic_component():
    error = UnclassifiedComponent(Stratum.from_text("Q(1,1,1,1)"))
    assert "not classified" in str(error)
