import pytest

from backend.core.models import Stratum
from backend.origami.enumeration import census
from backend.origami.multicurve import (
    MultiCurveType,
    Piece,
    horizontal_core,
    parse_type_token,
    type_equal,
    vertical_core,
)
from backend.origami.surface import from_cycle_strings, relabel, rotate90, singularity_profile, surface_from_code


@pytest.fixture
def two_zero_surface():
    """Genus two with two simple zeros; the regular vertices between the rows 3-4 and 5-6 stay unmarked."""
    surface = from_cycle_strings("(1,2)(3,4)(5,6)", "(1,4,6)(3,5)", 6)
    return surface.with_marks((0,) * 24)


def test_torus_core(torus, torus_type):
    core = horizontal_core(torus)
    assert core.type.token == torus_type
    assert len(core.cylinders) == 1
    assert core.cylinders[0].height == 1
    assert core.cylinders[0].width == 1


def test_l_origami_cores(l_origami):
    core = horizontal_core(l_origami)
    assert sorted(c.width for c in core.cylinders) == [1, 2]
    assert core.type.weights == (1, 1)
    assert core.type.euler_characteristic() == -3
    assert vertical_core(l_origami).weights == (1, 1)


def test_tall_cylinder_weight():
    column = from_cycle_strings("(1)(2)", "(1,2)")
    # Both vertices marked: the column splits into two cylinders of height one
    assert horizontal_core(column).type.weights == (1, 1)
    assert vertical_core(column).weights == (1,)

    first = column.vertex_cycles[0]
    marks = tuple(1 if corner in first else 0 for corner in range(8))
    single = column.with_marks(marks)
    assert horizontal_core(single).type.weights == (2,)
    assert vertical_core(single).weights == (1,)


def test_height_two_cylinder_and_three_columns(two_zero_surface):
    assert singularity_profile(two_zero_surface).stratum == Stratum.from_text("H(1,1)")
    core = horizontal_core(two_zero_surface)
    assert sorted(c.height for c in core.cylinders) == [1, 2]
    assert sorted(core.type.weights) == [1, 2]
    assert vertical_core(two_zero_surface).weights == (1, 1, 1)


def test_vertical_is_rotated_horizontal(l_origami):
    assert type_equal(vertical_core(l_origami), horizontal_core(rotate90(l_origami)).type)


def test_token_round_trip(l_origami):
    mc_type = horizontal_core(l_origami).type
    assert parse_type_token(mc_type.token) == mc_type


def test_parse_canonicalises_piece_order():
    first = parse_type_token("V:g0p1b1,g1p0b1;E:0-1w2")
    second = parse_type_token("V:g1p0b1,g0p1b1;E:0-1w2")
    assert first.token == second.token


def test_labelled_pieces():
    mc_type = parse_type_token("V:g0p2b2[1.2];E:0-0w1")
    assert mc_type.pieces[0].labels == (1, 2)
    assert "[1.2]" in mc_type.token


@pytest.mark.parametrize("token", ["g0p1b2;E:0-0w1", "V:g0p1b2;E:0-0", "V:g0p1b2;E:0-0w0", "V:g0p1b1;E:0-0w1"])
def test_invalid_tokens(token):
    with pytest.raises(ValueError):
        parse_type_token(token)


def test_boundary_count_checked():
    with pytest.raises(ValueError):
        MultiCurveType((Piece(0, 1, 1),), ((0, 0, 1),))


@pytest.mark.slow
@pytest.mark.parametrize("stratum, lmax", [
    (Stratum((0,), 1), 8),
    (Stratum((4,), 1), 6),
    (Stratum((-1, -1, -1, -1), 0), 4),
])
def test_core_types_across_census(stratum, lmax):
    for record in census(lmax, stratum).records:
        surface = surface_from_code(record.code)
        horizontal = horizontal_core(surface).type
        assert horizontal.token == record.horizontal
        assert type_equal(vertical_core(rotate90(surface)), horizontal)
        shift = tuple((square + 1) % surface.n_squares for square in range(surface.n_squares))
        assert type_equal(horizontal_core(relabel(surface, shift)).type, horizontal)
