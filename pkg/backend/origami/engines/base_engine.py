from abc import ABC, abstractmethod
from collections import Counter

from backend.core import constants
from backend.core.enums import CountingEngine
from backend.core.errors import UsageError
from backend.core.models import CountQuery, CountSeries
from backend.origami.census_cache import CensusStore
from backend.origami.multicurve import MultiCurveType, parse_type_token


class BaseCountingEngine(ABC):
    """
    Shared state of the counting engines: the query, a census provider and canonical types.

    Args:
        query (CountQuery): Stratum, component, multicurve types and area bound.
        store (CensusStore | None): Census provider, an in-memory one by default.
    """

    engine: CountingEngine

    def __init__(self, query: CountQuery, store: CensusStore | None = None):
        self.query = query
        self.store = store or CensusStore(jobs=query.jobs, max_surfaces=query.max_surfaces)
        self.gamma1 = parse_type_token(query.gamma1) if query.gamma1 else None
        self.gamma2 = parse_type_token(query.gamma2) if query.gamma2 else None

    @abstractmethod
    def run(self) -> CountSeries:
        pass

    # --- Helpers ---

    def _require_stratum(self) -> None:
        if self.query.stratum is None:
            raise UsageError(f"The {self.engine.value} engine needs --stratum")

    def _require_unlabeled(self) -> None:
        if self.query.labeled:
            raise UsageError(f"The {self.engine.value} engine counts unlabelled surfaces only")

    def _series(self, histogram: Counter, partial: bool = False, lmax: int | None = None) -> CountSeries:
        """
        Cumulative counts for L = 1..lmax from the number of surfaces of each area.

        Args:
            histogram (Counter): Area -> number of surfaces with exactly that area.
            partial (bool): Flag the series as produced by an aborted enumeration.
            lmax (int | None): Last complete area, the query's lmax by default.
        """
        points, running = [], 0
        for l_value in range(1, (lmax or self.query.lmax) + 1):
            running += histogram.get(l_value, 0)
            points.append((l_value, running))
        return CountSeries(
            points=points,
            engine=self.engine,
            gamma1=_token(self.gamma1),
            gamma2=_token(self.gamma2),
            stratum=self.query.stratum_label(),
            component=self.query.component.value,
            partial=partial,
        )


def _token(gamma: MultiCurveType | None) -> str:
    return gamma.token if gamma is not None else constants.ANY_TYPE
