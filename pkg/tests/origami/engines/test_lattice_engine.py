from fractions import Fraction

import pytest

from backend.core.enums import ComponentFilter
from backend.core.errors import UsageError
from backend.core.models import CountQuery, Stratum
from backend.origami.cylinder import move_action, parse_diagram_text, symmetries
from backend.origami.diagrams import enumerate_diagrams
from backend.origami.engines import DirectEngine, LatticeEngine
from backend.origami.engines.lattice import LatticeTask, integer_widths, lattice_histogram, width_orbits
from backend.origami.enumeration import census
from backend.origami.fitting import fit_power_law
from backend.origami.volume import total_volume


def test_torus_counts(torus_stratum, torus_type, store):
    series = LatticeEngine(CountQuery(stratum=torus_stratum, gamma1=torus_type, lmax=4), store).run()
    assert series.points == [(1, 1), (2, 3), (3, 6), (4, 10)]


def test_torus_histogram():
    diagram = parse_diagram_text("top: e1 | bottom: e1 ; a=1")
    assert lattice_histogram(LatticeTask(diagram, 5)) == {1: 1, 2: 2, 3: 3, 4: 4, 5: 5}


def test_integer_widths_respect_equalities():
    # Two cylinders: e1 + e2 on one top over e3 below, e3 on the other top over e1 e2 below
    diagram = parse_diagram_text("top: e1 e2 | bottom: e3 ; a=1\ntop: e3 | bottom: e1 e2 ; a=1")
    widths = list(integer_widths(diagram, 6))
    assert widths
    assert all(w[0] + w[1] == w[2] for w in widths)
    assert all(sum(w) <= 6 for w in widths)


def test_width_orbits_pick_one_representative():
    diagram = parse_diagram_text("top: e1 e2 | bottom: e2 e1 ; a=1")
    actions = [move_action(diagram, move) for move in symmetries(diagram)]
    representatives = [orbit.widths for orbit in width_orbits(diagram, actions, 4)]
    assert len(representatives) == len(set(representatives))
    for orbit in width_orbits(diagram, actions, 4):
        assert orbit.stabiliser


def test_matches_direct_counts(h2, store):
    tokens = sorted({r.horizontal for r in census(3, h2).records})
    for token in tokens:
        query = CountQuery(stratum=h2, gamma1=token, lmax=6)
        assert LatticeEngine(query, store).run().points == DirectEngine(query, store).run().points


@pytest.mark.slow
def test_matches_direct_counts_genus_two_pair(store):
    stratum = Stratum((2, 2), 1)
    tokens = sorted({r.horizontal for r in census(4, stratum).records})
    for token in tokens:
        query = CountQuery(stratum=stratum, gamma1=token, lmax=7)
        assert LatticeEngine(query, store).run().points == DirectEngine(query, store).run().points


def test_requires_stratum(torus_type):
    with pytest.raises(UsageError):
        LatticeEngine(CountQuery(gamma1=torus_type)).run()


def test_requires_unlabelled(torus_stratum, torus_type):
    with pytest.raises(UsageError):
        LatticeEngine(CountQuery(stratum=torus_stratum, gamma1=torus_type, labeled=True)).run()


def test_requires_gamma1(torus_stratum):
    with pytest.raises(ValueError):
        LatticeEngine(CountQuery(stratum=torus_stratum)).run()


@pytest.fixture(scope="module")
def torus_series():
    query = CountQuery(stratum=Stratum((0,), 1), gamma1="V:g0p1b2;E:0-0w1", lmax=1000)
    return LatticeEngine(query).run()


@pytest.mark.slow
def test_torus_counts_approach_half_square(torus_series):
    for l_value, count in torus_series.points:
        assert abs(Fraction(count, l_value ** 2) - Fraction(1, 2)) <= Fraction(1, l_value)


@pytest.mark.slow
def test_torus_fit(torus_series):
    result = fit_power_law(torus_series, 2)
    assert result.v_hat == pytest.approx(0.5, abs=1e-2)
    assert abs(result.h_hat - 2) < 0.1


@pytest.mark.slow
def test_genus_two_counts_approach_volume(h2, store):
    # One non-separating curve: a single horizontal cylinder of height one
    token = "V:g1p1b2;E:0-0w1"
    diagrams = [item.diagram for item in enumerate_diagrams(h2, ComponentFilter.ANY, token, store)]
    volume = total_volume(diagrams).total
    assert volume == Fraction(1, 24)

    l_value, count = LatticeEngine(CountQuery(stratum=h2, gamma1=token, lmax=200), store).run().points[-1]
    assert l_value == 200
    assert count / l_value ** 4 == pytest.approx(float(volume), rel=0.05)
