import re
from enum import Enum
from fractions import Fraction


def parse_enum(enum_class: type[Enum], input_str: str) -> Enum:
    """
    Convert a string to an instance of the specified Enum class, case-insensitively.

    Args:
        enum_class (type[Enum]): The Enum class to parse the string into.
        input_str (str): The input string to convert to an Enum member.

    Returns:
        Enum: The corresponding Enum member matching the input string (case-insensitive).

    Raises:
        ValueError: If the input string does not match any Enum member values.
    """
    for member in enum_class:
        if str(member.value).lower() == input_str.lower():
            return member
    valid_values = [e.value for e in enum_class]
    raise ValueError(f"Invalid value for '{enum_class.__name__}': '{input_str}'. Must be one of {valid_values}")


_STRATUM_LONG = re.compile(r"^\s*sigma\s*=\s*\[([^\]]*)\]\s*;\s*eps\s*=\s*([01])\s*$")
_STRATUM_SHORT = re.compile(r"^\s*([HQ])\s*\(([^)]*)\)\s*$")


def _parse_int_list(body: str) -> list[int]:
    body = body.strip()
    if not body:
        return []
    return [int(token) for token in body.split(",")]


def parse_stratum_text(text: str) -> tuple[tuple[int, ...], int]:
    """
    Parse a stratum description.

    Accepted forms are the explicit ``sigma=[4];eps=1`` (quadratic orders) and the shorthands
    ``H(k1,...)`` (abelian orders, doubled into quadratic orders, eps=1) and ``Q(s1,...)`` (eps=0).

    Args:
        text (str): The stratum description.

    Returns:
        tuple[tuple[int, ...], int]: Quadratic orders and epsilon.

    Raises:
        ValueError: If the text matches none of the accepted forms.
    """
    match = _STRATUM_LONG.match(text)
    if match:
        return tuple(_parse_int_list(match.group(1))), int(match.group(2))

    match = _STRATUM_SHORT.match(text)
    if match:
        orders = _parse_int_list(match.group(2))
        if match.group(1) == "H":
            return tuple(2 * k for k in orders), 1
        return tuple(orders), 0

    raise ValueError(f"Unknown stratum format: '{text}'. Expected 'sigma=[...];eps=0|1', 'H(...)' or 'Q(...)'")


def parse_cycles(text: str, size: int | None = None) -> tuple[int, ...]:
    """
    Parse a permutation written in 1-based cycle notation, e.g. ``(1,2)(3)`` or ``(1 2 3)``.

    Args:
        text (str): Cycle notation. An empty string or ``()`` is the identity.
        size (int | None): Number of points. Defaults to the largest point mentioned.

    Returns:
        tuple[int, ...]: The permutation as 0-based images.

    Raises:
        ValueError: If a point is repeated or the cycles are malformed.
    """
    cycles = re.findall(r"\(([^()]*)\)", text)
    leftover = re.sub(r"\(([^()]*)\)", "", text).strip()
    if leftover:
        raise ValueError(f"Malformed cycle notation: '{text}'")

    parsed = [[int(p) for p in re.split(r"[,\s]+", c.strip()) if p] for c in cycles]
    points = [p for cycle in parsed for p in cycle]
    if len(points) != len(set(points)):
        raise ValueError(f"Point repeated in cycle notation: '{text}'")
    if any(p < 1 for p in points):
        raise ValueError(f"Points are numbered from 1: '{text}'")

    n = size if size is not None else max(points, default=1)
    if points and max(points) > n:
        raise ValueError(f"Cycle notation '{text}' mentions points beyond {n}")

    images = list(range(n))
    for cycle in parsed:
        for k, point in enumerate(cycle):
            images[point - 1] = cycle[(k + 1) % len(cycle)] - 1
    return tuple(images)


def format_cycles(perm: tuple[int, ...]) -> str:
    """Cycle notation of a 0-based permutation, fixed points included."""
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle = []
        point = start
        while point not in seen:
            seen.add(point)
            cycle.append(str(point + 1))
            point = perm[point]
        parts.append("(" + ",".join(cycle) + ")")
    return "".join(parts)


def parse_fraction(text: str) -> Fraction:
    """
    Parse an exact rational such as ``1/8`` or ``0.25``.

    Raises:
        ValueError: If the text is not a rational number.
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational number: '{text}'") from e


def format_fraction(value: Fraction, precision: int) -> str:
    """Exact ``p/q`` form followed by a rounded decimal, e.g. ``1/8 (0.125)``."""
    return f"{value.numerator}/{value.denominator} ({float(value):.{precision}g})"
