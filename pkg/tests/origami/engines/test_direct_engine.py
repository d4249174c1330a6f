import pytest

from backend.core.enums import ComponentFilter, CountingEngine
from backend.core.errors import UnclassifiedComponent
from backend.core.models import ComponentTag, CountQuery, Stratum
from backend.origami.census_cache import CensusStore
from backend.origami.engines import DirectEngine, LatticeEngine, TrainTrackEngine
from backend.origami.enumeration import CensusRecord
from backend.origami.factory import CountingFactory


def test_all_marked_tori(torus_stratum, store):
    series = DirectEngine(CountQuery(stratum=torus_stratum, lmax=4), store).run()
    assert series.points == [(1, 1), (2, 4), (3, 8), (4, 15)]
    assert series.gamma1 == series.gamma2 == "*"
    assert series.engine is CountingEngine.DIRECT


def test_vertical_type_filter(torus_stratum, torus_type, store):
    series = DirectEngine(CountQuery(stratum=torus_stratum, gamma1=torus_type, lmax=4), store).run()
    assert series.counts() == [1, 3, 6, 10]
    assert series.gamma1 == torus_type


def test_both_types(torus_stratum, torus_type, store):
    query = CountQuery(stratum=torus_stratum, gamma1=torus_type, gamma2=torus_type, lmax=4)
    assert DirectEngine(query, store).run().counts() == [1, 2, 4, 6]


def test_component_filter(h2, store):
    every = DirectEngine(CountQuery(stratum=h2, lmax=5), store).run()
    hyp = DirectEngine(CountQuery(stratum=h2, component="hyp", lmax=5), store).run()
    even = DirectEngine(CountQuery(stratum=h2, component="even", lmax=5), store).run()
    assert hyp.points == every.points
    assert even.counts() == [0] * 5


def test_unclassified_record_with_filter():
    stratum = Stratum.from_text("Q(1,1,1,1)")
    record = CensusRecord(8, "x", stratum.sigma, 2, 0, ComponentTag(classified=False), "h", "v")
    engine = DirectEngine(CountQuery(stratum=stratum, component=ComponentFilter.HYP, lmax=8))
    with pytest.raises(UnclassifiedComponent):
        engine.matches(record)
    assert DirectEngine(CountQuery(stratum=stratum, lmax=8)).matches(record)


def test_partial_series(torus_stratum):
    store = CensusStore(max_surfaces=5)
    series = DirectEngine(CountQuery(stratum=torus_stratum, lmax=6), store).run()
    assert series.partial
    assert series.points == [(1, 1), (2, 4), (3, 8)]


def test_labelled_counts(store):
    stratum = Stratum((0, 0), 1)
    unlabeled = DirectEngine(CountQuery(stratum=stratum, lmax=3), store).run()
    labeled = DirectEngine(CountQuery(stratum=stratum, lmax=3, labeled=True), store).run()
    assert labeled.counts()[-1] >= unlabeled.counts()[-1]


@pytest.mark.parametrize("engine, expected", [
    (CountingEngine.CENSUS, DirectEngine),
    (CountingEngine.DIRECT, DirectEngine),
    (CountingEngine.LATTICE, LatticeEngine),
    (CountingEngine.TRAIN_TRACK, TrainTrackEngine),
])
def test_factory(engine, expected, torus_stratum):
    assert isinstance(CountingFactory.get_engine(engine, CountQuery(stratum=torus_stratum)), expected)


def test_factory_rejects_unknown():
    with pytest.raises(ValueError):
        CountingFactory.get_engine("abacus", CountQuery())
