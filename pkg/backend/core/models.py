from dataclasses import dataclass, field
import polars as pl

from .enums import ComponentFilter, CountingEngine
from .validators import validate_int, validate_positive_int, validate_nonnegative_int, validate_epsilon
from .parsers import parse_enum, parse_stratum_text
from . import constants

#--- Domain models---#

@dataclass(frozen=True)
class Stratum:
    """
    A stratum of quadratic differentials Q(sigma, epsilon).

    Orders use the quadratic convention: 0 is a marked point, -1 a pole and a zero of
    order k of an abelian differential appears as 2k. Orders are stored sorted in
    decreasing order.

    Attributes:
        sigma (tuple[int, ...]): Quadratic orders of the singularities (punctures).
        epsilon (int): 1 if the differentials are squares of abelian differentials, else 0.

    Raises:
        ValueError: If some order is below -1, if sum(sigma) is not 4g - 4 for some g >= 0,
            if epsilon = 1 with an odd or negative order, if sigma is empty or if h <= 0.
    """
    sigma: tuple[int, ...]
    epsilon: int = 1

    def __post_init__(self):
        for order in self.sigma:
            validate_int(order, "singularity order")
        validate_epsilon(self.epsilon)
        object.__setattr__(self, "sigma", tuple(sorted(self.sigma, reverse=True)))

        if not self.sigma:
            raise ValueError("A stratum needs at least one singularity or marked point")

        if any(order < -1 for order in self.sigma):
            raise ValueError(f"Invalid orders {list(self.sigma)}: every order must be at least -1")
        total = sum(self.sigma) + 4
        if total < 0 or total % 4:
            raise ValueError(f"Invalid orders {list(self.sigma)}: sum must equal 4g-4 for an integer g >= 0")
        if self.epsilon == 1 and any(order < 0 or order % 2 for order in self.sigma):
            raise ValueError(f"Invalid orders {list(self.sigma)} for epsilon=1: orders must be even and non-negative")
        if self.h <= 0:
            raise ValueError(f"Stratum {self.label()} has non-positive dimension h={self.h}")

    @classmethod
    def from_text(cls, text: str) -> "Stratum":
        sigma, epsilon = parse_stratum_text(text)
        return cls(sigma, epsilon)

    @property
    def genus(self) -> int:
        return (sum(self.sigma) + 4) // 4

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def h(self) -> int:
        return 2 * self.genus - 2 + self.n + self.epsilon

    @property
    def saddle_connection_count(self) -> int:
        """Number of horizontal saddle connections of any horizontally periodic surface in the stratum."""
        return 2 * self.genus - 2 + self.n

    @property
    def nonzero_orders(self) -> tuple[int, ...]:
        return tuple(order for order in self.sigma if order != 0)

    @property
    def marked_point_count(self) -> int:
        return sum(1 for order in self.sigma if order == 0)

    @property
    def abelian_orders(self) -> tuple[int, ...] | None:
        if self.epsilon != 1:
            return None
        return tuple(order // 2 for order in self.sigma)

    def label(self) -> str:
        return f"sigma=[{','.join(str(order) for order in self.sigma)}];eps={self.epsilon}"

    def __str__(self) -> str:
        if self.epsilon == 1:
            return "H(" + ",".join(str(k) for k in self.abelian_orders) + ")"
        return "Q(" + ",".join(str(order) for order in self.sigma) + ")"


@dataclass(frozen=True)
class ComponentTag:
    """
    Connected component invariants of a surface.

    Attributes:
        hyperelliptic (bool): Whether the surface lies in a hyperelliptic component.
        spin_parity (int | None): Arf invariant, None when not applicable.
        classified (bool): False for quadratic strata whose components are not classified.

    Raises:
        ValueError: If spin_parity is not 0, 1 or None.
    """
    hyperelliptic: bool = False
    spin_parity: int | None = None
    classified: bool = True

    def __post_init__(self):
        if self.spin_parity not in (None, 0, 1):
            raise ValueError(f"Invalid spin parity: '{self.spin_parity}'. Must be 0, 1 or None.")

    def matches(self, component: ComponentFilter) -> bool:
        """
        Check this tag against a component filter. EVEN and ODD select the non-hyperelliptic
        components of the given parity.
        """
        match component:
            case ComponentFilter.ANY:
                return True
            case ComponentFilter.HYP:
                return self.hyperelliptic
            case ComponentFilter.NONHYP:
                return not self.hyperelliptic
            case ComponentFilter.EVEN:
                return not self.hyperelliptic and self.spin_parity == 0
            case ComponentFilter.ODD:
                return not self.hyperelliptic and self.spin_parity == 1
            case _:
                raise ValueError(f"No component rule defined for filter: {component}")

    def label(self) -> str:
        if not self.classified:
            return "unclassified"
        if self.hyperelliptic:
            return "hyp"
        if self.spin_parity is None:
            return "nonhyp"
        return "even" if self.spin_parity == 0 else "odd"


#--- Configuration models---#

@dataclass
class CountQuery:
    """
    Parameters shared by every counting engine.

    Attributes:
        stratum (Stratum | None): Stratum filter, None for an unrestricted census.
        component (ComponentFilter or str): Connected component filter.
        gamma1 (str | None): Vertical multicurve type token, '*' or None for any.
        gamma2 (str | None): Horizontal multicurve type token, '*' or None for any.
        lmax (int): Largest area (number of squares) considered.
        labeled (bool): Treat singularities of equal order as distinguishable.
        jobs (int): Number of worker processes for sharded enumeration.
        seed (int): Seed for sampled property checks.
        max_surfaces (int): Census size at which enumeration aborts.

    Raises:
        ValueError: If lmax, jobs or max_surfaces are not positive, or the component is unknown.
    """
    stratum: Stratum | None = None
    component: ComponentFilter = ComponentFilter.ANY
    gamma1: str | None = None
    gamma2: str | None = None
    lmax: int = 1
    labeled: bool = False
    jobs: int = constants.DEFAULT_JOBS
    seed: int = 0
    max_surfaces: int = constants.DEFAULT_MAX_SURFACES

    def __post_init__(self):
        if isinstance(self.component, str) and not isinstance(self.component, ComponentFilter):
            self.component = parse_enum(ComponentFilter, self.component)
        if self.gamma1 == constants.ANY_TYPE:
            self.gamma1 = None
        if self.gamma2 == constants.ANY_TYPE:
            self.gamma2 = None
        validate_positive_int(self.lmax, "Lmax")
        validate_positive_int(self.jobs, "jobs")
        validate_nonnegative_int(self.seed, "seed")
        validate_positive_int(self.max_surfaces, "max surfaces")

    def stratum_label(self) -> str:
        return self.stratum.label() if self.stratum is not None else constants.ANY_TYPE

    def to_flat_dict(self) -> dict[str, str]:
        """
        Returns a flat dictionary representation of the query, formatted for export headers.

        Returns:
            dict[str, str]: A flat dictionary of query values.
        """
        return {
            "Stratum": self.stratum_label(),
            "Component": self.component.value,
            "Gamma1": self.gamma1 or constants.ANY_TYPE,
            "Gamma2": self.gamma2 or constants.ANY_TYPE,
            "Lmax": str(self.lmax),
            "Labeled singularities": str(self.labeled),
            "Seed": str(self.seed),
        }


#--- result models---#

@dataclass
class CountSeries:
    """
    Cumulative counts of surfaces with area at most L.

    Attributes:
        points (list[tuple[int, int]]): (L, count) pairs with increasing L.
        engine (CountingEngine): Engine that produced the counts.
        gamma1 (str): Vertical type token or '*'.
        gamma2 (str): Horizontal type token or '*'.
        stratum (str): Stratum label or '*'.
        component (str): Component filter value.
        partial (bool): True when the enumeration was aborted by a resource limit.

    Raises:
        ValueError: If L values are not positive and increasing, a count is negative,
            or counts decrease.
    """
    points: list[tuple[int, int]]
    engine: CountingEngine
    gamma1: str = constants.ANY_TYPE
    gamma2: str = constants.ANY_TYPE
    stratum: str = constants.ANY_TYPE
    component: str = ComponentFilter.ANY.value
    partial: bool = False

    def __post_init__(self):
        previous_l, previous_count = 0, 0
        for l_value, count in self.points:
            validate_positive_int(l_value, "L")
            validate_nonnegative_int(count, "count")
            if l_value <= previous_l:
                raise ValueError(f"L values must increase: {previous_l} then {l_value}")
            if count < previous_count:
                raise ValueError(f"Counts must be non-decreasing in L: {previous_count} then {count} at L={l_value}")
            previous_l, previous_count = l_value, count

    def counts(self) -> list[int]:
        return [count for _, count in self.points]

    def l_values(self) -> list[int]:
        return [l_value for l_value, _ in self.points]

    def count_at(self, l_value: int) -> int:
        for point_l, count in self.points:
            if point_l == l_value:
                return count
        raise KeyError(f"No count recorded at L={l_value}")

    def to_dataframe(self) -> pl.DataFrame:
        """
        Tabular form with the export column order ``L,count,engine,gamma1,gamma2,stratum,component``.
        """
        rows = len(self.points)
        return pl.DataFrame(
            {
                "L": self.l_values(),
                "count": self.counts(),
                "engine": [self.engine.value] * rows,
                "gamma1": [self.gamma1] * rows,
                "gamma2": [self.gamma2] * rows,
                "stratum": [self.stratum] * rows,
                "component": [self.component] * rows,
            },
            schema={
                "L": pl.Int64, "count": pl.Int64, "engine": pl.String, "gamma1": pl.String,
                "gamma2": pl.String, "stratum": pl.String, "component": pl.String,
            },
        )


@dataclass
class FitResult:
    """
    Power-law fit count(L) ~ v * L^h.

    Attributes:
        v_hat (float): Fitted leading constant with the exponent fixed to h.
        h (int): Exponent used for the constant fit.
        h_hat (float): Log-log slope of the counts over the fitting window.
        kappa_hat (float | None): Empirical error exponent, None if the residuals vanish.
        residual_norm (float): Euclidean norm of count - v_hat * L^h over the fitting window.
        max_relative_residual (float): Largest |count - v_hat L^h| / count over the window.
        window (tuple[int, int]): Smallest and largest L in the fitting window.
        n_points (int): Number of points used for the constant fit.
    """
    v_hat: float
    h: int
    h_hat: float
    kappa_hat: float | None
    residual_norm: float
    max_relative_residual: float
    window: tuple[int, int]
    n_points: int

    def to_dict(self) -> dict:
        return {
            "v_hat": self.v_hat,
            "h": self.h,
            "h_hat": self.h_hat,
            "kappa_hat": self.kappa_hat,
            "residual_norm": self.residual_norm,
            "max_relative_residual": self.max_relative_residual,
            "window": list(self.window),
            "n_points": self.n_points,
        }


#--- report models---#

@dataclass
class CSVReport:
    """
    Represents a CSV report with optional comments, column headers, and data rows.

    Attributes:
        comments (list[str]): Lines of comments to include at the top of the CSV,
            typically prefixed by a comment character (e.g., '#').
        headers (list[str]): The list of column headers for the CSV.
        rows (list[tuple]): The data rows of the CSV, where each tuple corresponds to a row.
    """
    comments: list[str]
    headers: list[str]
    rows: list[tuple] = field(default_factory=list)
