import itertools

import pytest

from backend.core.enums import GluingFlag
from backend.core.errors import Disconnected, InvalidGluing
from backend.core.models import Stratum
from backend.origami.enumeration import census
from backend.origami.surface import (
    automorphisms,
    build_from_permutations,
    canonical_form,
    epsilon,
    flip_squares,
    format_surface_text,
    from_cycle_strings,
    parse_surface_text,
    relabel,
    require_valid,
    rotate90,
    singularity_profile,
    surface_from_code,
    to_permutations,
    validate,
)


class TestConstruction:
    def test_torus_profile(self, torus):
        assert validate(torus) == []
        assert singularity_profile(torus).stratum == Stratum((0,), 1)

    def test_l_origami_has_one_cone_point(self, l_origami):
        assert len(l_origami.vertex_cycles) == 1
        assert len(l_origami.vertex_cycles[0]) == 12
        assert singularity_profile(l_origami).stratum == Stratum.from_text("H(2)")

    def test_pillowcase_profile(self, pillowcase):
        assert validate(pillowcase) == []
        assert singularity_profile(pillowcase).stratum == Stratum.from_text("Q(-1,-1,-1,-1)")
        assert epsilon(pillowcase).epsilon == 0

    def test_permutations_round_trip(self, l_origami):
        assert to_permutations(l_origami) == ((1, 0, 2), (2, 1, 0))

    def test_disconnected_permutations(self):
        with pytest.raises(Disconnected):
            from_cycle_strings("(1)(2)", "(1)(2)")

    def test_rotation_gluings_have_no_permutations(self, pillowcase):
        with pytest.raises(ValueError):
            to_permutations(pillowcase)

    def test_three_square_torus(self):
        profile = singularity_profile(from_cycle_strings("(1,2,3)", "(1)(2)(3)"))
        assert profile.stratum == Stratum((0, 0, 0), 1)
        assert profile.stratum.genus == 1

    def test_two_square_permutation_pairs(self):
        codes = set()
        transitive = 0
        for h_text, v_text in itertools.product(["(1)(2)", "(1,2)"], repeat=2):
            try:
                surface = from_cycle_strings(h_text, v_text, 2)
            except Disconnected:
                continue
            transitive += 1
            codes.add(canonical_form(surface))
        assert transitive == 3
        assert len(codes) == 3


class TestValidation:
    def test_axis_mismatch(self):
        surface = parse_surface_text("n=1\n1:R 1:T translation\n1:L 1:B translation")
        assert any("axis mismatch" in v for v in validate(surface))
        with pytest.raises(InvalidGluing):
            require_valid(surface)

    def test_wrong_flag_reported(self):
        surface = parse_surface_text("n=1\n1:R 1:L rotation\n1:T 1:B translation")
        assert any("orientable" in v for v in validate(surface))

    def test_half_turns_on_opposite_sides(self):
        surface = parse_surface_text("n=1\n1:T 1:B rotation\n1:R 1:L rotation")
        # The sign constraints form an odd loop on the single square
        assert epsilon(surface).epsilon == 0
        violations = validate(surface)
        assert len(violations) == 2
        assert all(v.endswith("only translation keeps this gluing orientable") for v in violations)
        with pytest.raises(InvalidGluing):
            require_valid(surface)

    def test_rotation_gluings_between_squares(self):
        text = "\n".join([
            "n=2",
            "1:R 2:R rotation",
            "1:L 2:L rotation",
            "1:T 1:B translation",
            "2:T 2:B translation",
        ])
        surface = parse_surface_text(text)
        assert validate(surface) == []
        profile = singularity_profile(surface)
        assert profile.stratum == Stratum((0, 0), 1)
        normal = epsilon(surface).normal_form
        assert all(flag is GluingFlag.TRANSLATION for flag in normal.flags)


class TestCanonicalForm:
    def test_relabel_invariant(self, l_origami):
        assert canonical_form(relabel(l_origami, (2, 0, 1))) == canonical_form(l_origami)

    def test_turning_squares_invariant(self, l_origami):
        flipped = flip_squares(l_origami, {1})
        assert any(flag is GluingFlag.ROTATION for flag in flipped.flags)
        assert canonical_form(flipped) == canonical_form(l_origami)
        assert epsilon(flipped).epsilon == 1

    def test_distinguishes_rotated_cylinders(self):
        wide = from_cycle_strings("(1,2)", "(1)(2)")
        tall = from_cycle_strings("(1)(2)", "(1,2)")
        assert canonical_form(wide) != canonical_form(tall)
        assert canonical_form(rotate90(wide)) == canonical_form(tall)

    def test_rotated_permutation_torus(self):
        wide = build_from_permutations((1, 0), (0, 1))
        tall = build_from_permutations((0, 1), (1, 0))
        assert canonical_form(rotate90(wide)) == canonical_form(tall)

    def test_code_rebuilds_surface(self, l_origami):
        code = canonical_form(l_origami)
        assert canonical_form(surface_from_code(code)) == code

    def test_malformed_code(self):
        with pytest.raises(ValueError):
            surface_from_code("2/1.2.3")

    def test_four_quarter_turns(self, l_origami):
        turned = rotate90(rotate90(rotate90(rotate90(l_origami))))
        assert turned.partner == l_origami.partner

    def test_torus_automorphisms(self, torus):
        maps = automorphisms(torus)
        assert len(maps) == 2
        assert maps[0].is_identity()


class TestTextFormat:
    def test_round_trip(self, l_origami):
        parsed = parse_surface_text(format_surface_text(l_origami))
        assert parsed.partner == l_origami.partner
        assert parsed.flags == l_origami.flags

    def test_permutation_shorthand(self, l_origami):
        parsed = parse_surface_text("h=(1,2)(3) v=(1,3)(2)")
        assert canonical_form(parsed) == canonical_form(l_origami)

    @pytest.mark.parametrize("text", ["", "squares=2", "n=1\n1:R 1:L", "n=1\n1:R 1:L translation", "h=(1,2)"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_surface_text(text)


CENSUS_SWEEP = [
    (Stratum((0,), 1), 8),
    (Stratum((4,), 1), 6),
    (Stratum((-1, -1, -1, -1), 0), 4),
]


@pytest.mark.slow
@pytest.mark.parametrize("stratum, lmax", CENSUS_SWEEP)
def test_quarter_turn_keeps_profile(stratum, lmax):
    for record in census(lmax, stratum).records:
        surface = surface_from_code(record.code)
        turned = rotate90(surface)
        assert singularity_profile(turned).stratum == singularity_profile(surface).stratum == stratum
        assert epsilon(turned).epsilon == epsilon(surface).epsilon == stratum.epsilon
