import pytest

from backend.core import constants
from backend.core.errors import CacheMismatch
from backend.core.models import Stratum
from backend.core.paths import get_cache_file_path
from backend.origami.census_cache import CensusStore, read_cache, read_header, write_cache
from backend.origami.enumeration import census


@pytest.fixture
def tori(torus_stratum):
    return census(4, torus_stratum)


def test_write_then_read(tmp_path, tori, torus_stratum):
    path = tmp_path / "tori.txt"
    write_cache(path, tori)
    assert path.read_text().startswith(constants.CACHE_MAGIC)
    loaded = read_cache(path, torus_stratum, False, 4)
    assert loaded.records == tori.records


def test_read_smaller_prefix(tmp_path, tori, torus_stratum):
    path = tmp_path / "tori.txt"
    write_cache(path, tori)
    loaded = read_cache(path, torus_stratum, False, 2)
    assert [r.area for r in loaded.records] == [1, 2, 2, 2]


def test_header(tmp_path, tori):
    path = tmp_path / "tori.txt"
    write_cache(path, tori)
    header = read_header(path)
    assert header["stratum"] == "sigma=[0];eps=1"
    assert header["lmax"] == "4"
    assert header["partial"] == "False"


@pytest.mark.parametrize("stratum_text, labeled, lmax", [
    ("H(2)", False, 4),
    ("H(0)", True, 4),
    ("H(0)", False, 5),
])
def test_mismatches(tmp_path, tori, stratum_text, labeled, lmax):
    path = tmp_path / "tori.txt"
    write_cache(path, tori)
    with pytest.raises(CacheMismatch):
        read_cache(path, Stratum.from_text(stratum_text), labeled, lmax)


def test_bad_magic(tmp_path):
    path = tmp_path / "other.txt"
    path.write_text("area,code\n1,x\n")
    with pytest.raises(CacheMismatch):
        read_header(path)


def test_store_writes_and_reuses(tmp_path, torus_stratum):
    store = CensusStore(tmp_path)
    first = store.get(torus_stratum, False, 3)
    path = get_cache_file_path(tmp_path, torus_stratum.label(), False)
    assert path.exists()

    fresh = CensusStore(tmp_path)
    assert fresh.get(torus_stratum, False, 2).records == [r for r in first.records if r.area <= 2]


def test_store_rebuilds_when_cache_too_small(tmp_path, torus_stratum):
    CensusStore(tmp_path).get(torus_stratum, False, 2)
    result = CensusStore(tmp_path).get(torus_stratum, False, 4)
    assert result.lmax == 4
    assert read_header(get_cache_file_path(tmp_path, torus_stratum.label(), False))["lmax"] == "4"


def test_memory_store_trims(torus_stratum):
    store = CensusStore()
    store.get(torus_stratum, False, 4)
    assert len(store.get(torus_stratum, False, 1).records) == 1
