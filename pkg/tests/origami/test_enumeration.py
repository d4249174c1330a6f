from collections import Counter

import pytest

from backend.core.errors import ResourceLimitExceeded
from backend.core.models import Stratum
from backend.origami.enumeration import census, census_by_permutations, make_record, marked_versions
from backend.origami.surface import from_cycle_strings

DIVISOR_SUMS = {1: 1, 2: 3, 3: 4, 4: 7, 5: 6, 6: 12, 7: 8, 8: 15}


def _per_area(result):
    return Counter(r.area for r in result.records)


def test_single_square():
    result = census(1)
    assert len(result.records) == 1
    assert result.records[0].genus == 1


def test_marked_tori_count_divisor_sums(torus_stratum):
    counts = _per_area(census(6, torus_stratum))
    assert {n: counts[n] for n in range(1, 7)} == {n: DIVISOR_SUMS[n] for n in range(1, 7)}


@pytest.mark.slow
def test_marked_tori_up_to_eight(torus_stratum):
    counts = _per_area(census(8, torus_stratum))
    assert counts[7] == DIVISOR_SUMS[7]
    assert counts[8] == DIVISOR_SUMS[8]


@pytest.mark.parametrize("n", [3, 4])
def test_orderly_search_matches_permutations(h2, n):
    codes = [r.code for r in census(n, h2).records if r.area == n]
    assert codes == census_by_permutations(n, h2)


def test_records_sorted_and_unique(h2):
    records = census(5, h2).records
    keys = [r.sort_key for r in records]
    assert keys == sorted(keys)
    assert len({r.code for r in records}) == len(records)
    assert all(r.sigma == (4,) and r.genus == 2 for r in records)


def test_quadratic_stratum_has_pillowcases():
    records = census(3, Stratum.from_text("Q(-1,-1,-1,-1)")).records
    assert records
    assert all(r.epsilon == 0 and r.genus == 0 for r in records)


def test_empty_genus_one_stratum():
    # Q(1,-1) is a valid stratum label but holds no surfaces
    assert census(3, Stratum.from_text("Q(1,-1)")).records == []


def test_jobs_do_not_change_output(h2):
    assert census(5, h2, jobs=2).records == census(5, h2, jobs=1).records


def test_resource_limit_carries_partial(torus_stratum):
    with pytest.raises(ResourceLimitExceeded) as info:
        census(6, torus_stratum, max_surfaces=5)
    partial = info.value.partial
    assert partial.partial
    assert partial.lmax == 3
    assert len(partial.records) == 8


def test_labelled_census_needs_stratum():
    with pytest.raises(ValueError):
        census(2, None, labeled=True)


def test_labelled_singularities_split_classes():
    stratum = Stratum((0, 0), 1)
    unlabeled = census(3, stratum).records
    labeled = census(3, stratum, labeled=True).records
    assert len(labeled) >= len(unlabeled)


def test_marked_versions_choose_regular_vertices():
    column = from_cycle_strings("(1)(2)", "(1,2)")
    versions = marked_versions(column, Stratum((0,), 1), False)
    # The two vertices are exchanged by a translation, so one class remains
    assert len(versions) == 1
    record = make_record(versions[0])
    assert record.sigma == (0,)
    assert record.horizontal != record.vertical
