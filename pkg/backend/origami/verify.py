import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction

from backend.core.enums import ComponentFilter, CountingEngine
from backend.core.errors import InsufficientData, UnclassifiedComponent
from backend.core.models import CountQuery, Stratum
from .census_cache import CensusStore
from .components import component_tag
from .cylinder import decompose, normalize_twists, reconstruct
from .diagrams import enumerate_diagrams
from .engines.train_track import s_count, sq_tt_count
from .factory import CountingFactory
from .fitting import fit_power_law
from .multicurve import parse_type_token
from .polyhedra import l1_diameter, lipschitz_constant, partition, poly_extrema, riemann_bounds
from .surface import canonical_form, rotate90, surface_from_code
from .train_track import build_chart
from .volume import chart_volume, total_volume

logger = logging.getLogger(__name__)

TORUS = Stratum((0,), 1)
SIGMA_ORACLE_MAX = 8
RIEMANN_DELTAS = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


@dataclass
class CheckResult:
    """
    Attributes:
        name (str): Check name.
        passed (bool): Outcome; diagnostics always pass.
        detail (str): What was compared, or the first failures.
        diagnostic (bool): Reported but never a failure.
    """
    name: str
    passed: bool
    detail: str
    diagnostic: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "diagnostic": self.diagnostic}


def divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def _summary(failures: list[str], checked: int, what: str) -> str:
    if not failures:
        return f"{checked} {what} checked"
    shown = "; ".join(failures[:5])
    more = f" (+{len(failures) - 5} more)" if len(failures) > 5 else ""
    return f"{len(failures)} of {checked} {what} failed: {shown}{more}"


class Verifier:
    """
    Invariant suite over a stratum: census oracle, round trips, dimension identity, engine
    equality, sandwich, Riemann and Lipschitz bounds, and the leading constant product as a
    diagnostic.

    Args:
        query (CountQuery): Stratum (genus-one marked torus when None), component, lmax and seed.
        store (CensusStore | None): Census provider shared by every check.
        sample_cells (int): Partition cells drawn for the sandwich check.
    """

    def __init__(self, query: CountQuery, store: CensusStore | None = None, sample_cells: int = 100):
        self.query = replace(query, stratum=query.stratum or TORUS)
        self.store = store or CensusStore(jobs=query.jobs, max_surfaces=query.max_surfaces)
        self.sample_cells = sample_cells
        self.rng = random.Random(query.seed)
        self.stratum = self.query.stratum
        self.records = [r for r in self._records() if self._component_ok(r.tag)]

    def _records(self):
        return self.store.get(self.stratum, False, self.query.lmax).records

    def _component_ok(self, tag) -> bool:
        if self.query.component is ComponentFilter.ANY:
            return True
        if not tag.classified:
            raise UnclassifiedComponent(self.stratum)
        return tag.matches(self.query.component)

    def horizontal_types(self) -> list[str]:
        return sorted({r.horizontal for r in self.records})

    def type_pairs(self) -> list[tuple[str, str]]:
        return sorted({(r.vertical, r.horizontal) for r in self.records})

    # --- Checks ---

    def check_census_oracle(self) -> CheckResult:
        """Genus-one classes with exactly n squares number sigma(n), the sum of divisors of n."""
        top = min(self.query.lmax, SIGMA_ORACLE_MAX)
        counts = Counter(r.area for r in self.store.get(TORUS, False, top).records)
        failures = [
            f"n={n}: {counts.get(n, 0)} != {divisor_sum(n)}"
            for n in range(1, top + 1) if counts.get(n, 0) != divisor_sum(n)
        ]
        return CheckResult("census_sigma_oracle", not failures, _summary(failures, top, "areas"))

    def check_round_trip(self) -> CheckResult:
        failures = []
        for record in self.records:
            diagram, params = decompose(surface_from_code(record.code))
            rebuilt = reconstruct(diagram, normalize_twists(diagram, params))
            if canonical_form(rebuilt).decode("ascii") != record.code:
                failures.append(record.code)
        return CheckResult("round_trip", not failures, _summary(failures, len(self.records), "surfaces"))

    def check_rotation_component(self) -> CheckResult:
        failures = []
        for record in self.records:
            if not record.tag.classified:
                continue
            if component_tag(rotate90(surface_from_code(record.code))) != record.tag:
                failures.append(record.code)
        return CheckResult("rotation_preserves_component", not failures, _summary(failures, len(self.records), "surfaces"))

    def check_dimension_identity(self) -> CheckResult:
        failures, checked = [], 0
        for token in self.horizontal_types():
            for item in enumerate_diagrams(self.stratum, self.query.component, token, self.store):
                checked += 1
                if item.diagram.dimension() != self.stratum.h:
                    failures.append(f"{item.diagram.code()} has dimension {item.diagram.dimension()}")
        return CheckResult("dimension_identity", not failures, _summary(failures, checked, "diagrams"))

    def _series(self, engine: CountingEngine, gamma1: str | None, gamma2: str | None) -> list[tuple[int, int]]:
        query = replace(self.query, gamma1=gamma1, gamma2=gamma2, labeled=False)
        return CountingFactory.get_engine(engine, query, self.store).run().points

    def check_engine_equality(self) -> CheckResult:
        """Lattice against direct counts for every vertical type, train-track against direct for every pair."""
        failures, checked = [], 0
        for token in self.horizontal_types():
            checked += 1
            lattice = self._series(CountingEngine.LATTICE, token, None)
            direct = self._series(CountingEngine.DIRECT, token, None)
            if lattice != direct:
                failures.append(f"lattice {token}: {lattice[-1]} vs direct {direct[-1]}")
        for vertical, horizontal in self.type_pairs():
            checked += 1
            train_track = self._series(CountingEngine.TRAIN_TRACK, vertical, horizontal)
            direct = self._series(CountingEngine.DIRECT, vertical, horizontal)
            if train_track != direct:
                failures.append(f"train-track ({vertical}, {horizontal}): {train_track[-1]} vs direct {direct[-1]}")
        return CheckResult("engine_equality", not failures, _summary(failures, checked, "series"))

    def _charts(self):
        return [
            build_chart(item.diagram)
            for token in self.horizontal_types()
            for item in enumerate_diagrams(self.stratum, self.query.component, token, self.store)
        ]

    def check_sandwich(self) -> CheckResult:
        """s(gamma1, U, floor(L/M)) <= sq_tt(gamma1, gamma2, U, L) <= s(gamma1, U, floor(L/m)) on sampled cells."""
        cells = [(chart, cell) for chart in self._charts() for cell in partition(chart, Fraction(1, 2)).cells]
        sample = self.rng.sample(cells, min(self.sample_cells, len(cells)))
        gammas = [None] + [parse_type_token(v) for v in sorted({r.vertical for r in self.records})]
        failures = []
        for chart, cell in sample:
            m, big_m = poly_extrema(chart, cell)
            l_value = self.rng.randint(1, self.query.lmax)
            gamma1 = self.rng.choice(gammas)
            lower = s_count(chart, cell, math.floor(Fraction(l_value) / big_m), gamma1)
            middle = sq_tt_count(chart, cell, l_value, gamma1)
            upper = s_count(chart, cell, math.floor(Fraction(l_value) / m), gamma1)
            if not lower <= middle <= upper:
                failures.append(f"cell {cell.index} L={l_value}: {lower} <= {middle} <= {upper}")
        return CheckResult("sandwich_bounds", not failures, _summary(failures, len(sample), "cells"))

    def check_riemann(self) -> CheckResult:
        """Partition sums bracket the chart volume and tighten as delta halves."""
        failures, checked = [], 0
        for chart in self._charts():
            exact = chart_volume(chart.diagram).raw
            previous = None
            for delta in RIEMANN_DELTAS:
                checked += 1
                lower, upper = riemann_bounds(chart, partition(chart, delta).cells)
                if not lower <= exact <= upper:
                    failures.append(f"delta={delta}: {lower} <= {exact} <= {upper}")
                if previous is not None and upper - lower > previous:
                    failures.append(f"delta={delta}: bracket widened to {upper - lower}")
                previous = upper - lower
        return CheckResult("riemann_bounds", not failures, _summary(failures, checked, "partitions"))

    def check_lipschitz(self) -> CheckResult:
        failures, checked = [], 0
        for chart in self._charts():
            constant = lipschitz_constant(chart)
            for cell in partition(chart, Fraction(1, 4)).cells:
                checked += 1
                m, big_m = poly_extrema(chart, cell)
                diameter = l1_diameter(cell.polyhedron.vertices())
                if big_m - m > constant * diameter:
                    failures.append(f"cell {cell.index}: {big_m - m} > {constant} * {diameter}")
        return CheckResult("lipschitz", not failures, _summary(failures, checked, "cells"))

    def check_product_constant(self) -> CheckResult:
        """Fitted constant of sq(gamma1, gamma2) against v(gamma1) * v(gamma2); never fails."""
        pairs = self.type_pairs()
        if not pairs:
            return CheckResult("leading_constant_product", True, "no surfaces", diagnostic=True)
        vertical, horizontal = pairs[0]
        volumes = []
        for token in (vertical, horizontal):
            diagrams = [item.diagram for item in enumerate_diagrams(self.stratum, self.query.component, token, self.store)]
            volumes.append(total_volume(diagrams).total)
        product = volumes[0] * volumes[1]
        series = CountingFactory.get_engine(
            CountingEngine.DIRECT, replace(self.query, gamma1=vertical, gamma2=horizontal, labeled=False), self.store
        ).run()
        try:
            fit = fit_power_law(series, self.stratum.h)
        except InsufficientData as e:
            return CheckResult("leading_constant_product", True, f"v1*v2={product}; {e}", diagnostic=True)
        ratio = fit.v_hat / float(product) if product else float("nan")
        detail = f"v_hat={fit.v_hat:.6g}, v1*v2={product} ({float(product):.6g}), ratio={ratio:.4f}"
        return CheckResult("leading_constant_product", True, detail, diagnostic=True)

    def run(self) -> list[CheckResult]:
        checks = [
            self.check_census_oracle,
            self.check_round_trip,
            self.check_rotation_component,
            self.check_dimension_identity,
            self.check_engine_equality,
            self.check_sandwich,
            self.check_riemann,
            self.check_lipschitz,
            self.check_product_constant,
        ]
        results = []
        for check in checks:
            result = check()
            level = logging.INFO if result.passed else logging.ERROR
            logger.log(level, "%s: %s", result.name, result.detail)
            results.append(result)
        return results
