from fractions import Fraction

import pytest

from backend.core.enums import OutputFormat
from backend.core.parsers import (
    format_cycles,
    format_fraction,
    parse_cycles,
    parse_enum,
    parse_fraction,
    parse_stratum_text,
)


def test_parse_cycles_is_one_based():
    assert parse_cycles("(1,2)(3)") == (1, 0, 2)
    assert parse_cycles("(1 2 3)") == (1, 2, 0)


def test_parse_cycles_pads_to_size():
    assert parse_cycles("(1,2)", size=4) == (1, 0, 2, 3)
    assert parse_cycles("", size=2) == (0, 1)


@pytest.mark.parametrize("text", ["(1,2)(2)", "(0,1)", "(1,2", "(1,5)"])
def test_parse_cycles_rejects(text):
    with pytest.raises(ValueError):
        parse_cycles(text, size=4 if text == "(1,5)" else None)


def test_format_cycles_lists_fixed_points():
    assert format_cycles((1, 0, 2)) == "(1,2)(3)"


def test_stratum_text_forms():
    assert parse_stratum_text("sigma=[4];eps=1") == ((4,), 1)
    assert parse_stratum_text("H(1,1)") == ((2, 2), 1)
    assert parse_stratum_text("Q(2,-1,-1)") == ((2, -1, -1), 0)
    with pytest.raises(ValueError):
        parse_stratum_text("stratum 4")


def test_fractions():
    assert parse_fraction("1/8") == Fraction(1, 8)
    assert parse_fraction("0.25") == Fraction(1, 4)
    assert format_fraction(Fraction(1, 2), 12) == "1/2 (0.5)"
    with pytest.raises(ValueError):
        parse_fraction("one half")


def test_parse_enum_case_insensitive():
    assert parse_enum(OutputFormat, "JSON") is OutputFormat.JSON
    with pytest.raises(ValueError):
        parse_enum(OutputFormat, "xml")
