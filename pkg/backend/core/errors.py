class OrigamiError(Exception):
    """Base class for every domain error raised by the census and counting engines."""


class UsageError(OrigamiError):
    """Invalid combination of command line options or query parameters."""


class Disconnected(OrigamiError):
    """The gluing data does not describe a connected surface."""


class InvalidGluing(OrigamiError):
    """The gluing data violates one of the surface invariants."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("Invalid gluing: " + "; ".join(violations))


class OddCycle(InvalidGluing):
    """A corner cycle of odd length was found (cone angle not a multiple of pi)."""

    def __init__(self, length: int):
        super().__init__([f"corner cycle of odd length {length}"])


class UnclassifiedComponent(OrigamiError):
    """Connected components of this quadratic stratum are not classified."""

    def __init__(self, stratum):
        self.stratum = stratum
        super().__init__(f"Connected components of {stratum} are not classified; treat the stratum as one bucket")


class InvalidParams(OrigamiError):
    """Cylinder parameters are inconsistent with the cylinder diagram."""


class DegenerateChart(OrigamiError):
    """The width polytope of a chart is empty."""


class EmptyPolyhedron(OrigamiError):
    """A polyhedron has no points."""


class InsufficientData(OrigamiError):
    """Not enough points to perform a fit."""


class CacheMismatch(OrigamiError):
    """A census cache file does not match the query it is read for."""


class ResourceLimitExceeded(OrigamiError):
    """An enumeration exceeded its configured limit. Carries whatever was produced before the abort."""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)
