from backend.core.enums import CountingEngine
from backend.core.models import CountQuery
from backend.origami.census_cache import CensusStore
from backend.origami.engines import BaseCountingEngine, DirectEngine, LatticeEngine, TrainTrackEngine


class CountingFactory:
    """
    Factory class for instantiating counting engines based on the selected CountingEngine.
    """

    @staticmethod
    def get_engine(engine: CountingEngine, query: CountQuery, store: CensusStore | None = None) -> BaseCountingEngine:
        """
        Returns the counting engine for the given kind.

        Args:
            engine (CountingEngine): The selected engine. CENSUS counts with the direct engine.
            query (CountQuery): Counting query.
            store (CensusStore | None): Census provider shared with other engines.

        Returns:
            BaseCountingEngine: An instance of the corresponding engine.

        Raises:
            ValueError: If the engine is not supported.
        """
        match engine:
            case CountingEngine.CENSUS | CountingEngine.DIRECT:
                return DirectEngine(query, store)
            case CountingEngine.LATTICE:
                return LatticeEngine(query, store)
            case CountingEngine.TRAIN_TRACK:
                return TrainTrackEngine(query, store)
            case _:
                raise ValueError(f"No counting engine defined for engine: {engine}")
