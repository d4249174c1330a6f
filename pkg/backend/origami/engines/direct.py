import logging
from collections import Counter

from backend.core.enums import ComponentFilter, CountingEngine
from backend.core.errors import ResourceLimitExceeded, UnclassifiedComponent
from backend.core.models import CountSeries
from backend.origami.enumeration import CensusRecord
from .base_engine import BaseCountingEngine

logger = logging.getLogger(__name__)


class DirectEngine(BaseCountingEngine):
    """Counts census records by vertical type, horizontal type, component and area."""

    engine = CountingEngine.DIRECT

    def matches(self, record: CensusRecord) -> bool:
        """
        Raises:
            UnclassifiedComponent: If a component filter meets an unclassified record.
        """
        if self.gamma1 is not None and record.vertical != self.gamma1.token:
            return False
        if self.gamma2 is not None and record.horizontal != self.gamma2.token:
            return False
        if self.query.component is ComponentFilter.ANY:
            return True
        if not record.tag.classified:
            raise UnclassifiedComponent(self.query.stratum)
        return record.tag.matches(self.query.component)

    def run(self) -> CountSeries:
        """
        Returns:
            CountSeries: sq(gamma1, gamma2, Q, L) for L = 1..lmax, '*' types left unconstrained.
        """
        try:
            result = self.store.get(self.query.stratum, self.query.labeled, self.query.lmax)
        except ResourceLimitExceeded as e:
            if e.partial is None:
                raise
            logger.warning("%s; counting the complete areas only", e)
            result = e.partial
        histogram = Counter(record.area for record in result.records if self.matches(record))
        logger.info("Direct count over %d census records: %d matches", len(result.records), sum(histogram.values()))
        return self._series(histogram, result.partial, result.lmax)
