from fractions import Fraction


def validate_int(obj, name: str) -> None:
    """
    Validate that the given object is an integer.

    Args:
        obj: The object to validate.
        name: The name of the variable (used for error messages).

    Raises:
        TypeError: If the object is not an instance of int (booleans are rejected).
    """
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise TypeError(f"{name} must be an integer. Currently {type(obj)} : {obj} ")


def validate_positive_int(value: int, field_name: str) -> None:
    """
    Validate that the given value is a strictly positive integer.

    Args:
        value (int): The value to validate.
        field_name (str): The name of the field being validated, used in error messages.

    Raises:
        TypeError: If the value is not an integer.
        ValueError: If the value is not greater than zero.
    """
    validate_int(value, field_name)
    if value <= 0:
        raise ValueError(f"Invalid {field_name}: '{value}'. Must be positive.")


def validate_nonnegative_int(value: int, field_name: str) -> None:
    validate_int(value, field_name)
    if value < 0:
        raise ValueError(f"Invalid {field_name}: '{value}'. Must be zero or positive.")


def validate_epsilon(epsilon: int) -> None:
    """
    Validate the orientability class of a stratum.

    Raises:
        ValueError: If epsilon is not 0 or 1.
    """
    if epsilon not in (0, 1):
        raise ValueError(f"Invalid epsilon: '{epsilon}'. Must be 0 or 1.")


def validate_delta(delta: Fraction) -> None:
    """
    Validate a partition mesh size.

    Raises:
        ValueError: If delta is not in (0, 1].
    """
    if not 0 < delta <= 1:
        raise ValueError(f"Invalid delta: '{delta}'. Must lie in (0, 1].")


def validate_permutation(perm: tuple[int, ...], name: str) -> None:
    """
    Validate that a tuple is a permutation of range(len(perm)).

    Raises:
        ValueError: If some image is repeated or out of range.
    """
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{name} is not a bijection on {{1..{len(perm)}}}: {[p + 1 for p in perm]}")
