import json

import pytest

from backend.core.enums import CountingEngine, OutputFormat
from backend.core.errors import UsageError
from backend.core.models import CountQuery, CountSeries
from backend.origami.census_cache import CensusStore
from backend.origami.runner import CountRunner, read_series_csv, series_to_text
from backend.origami.verify import CheckResult, Verifier


@pytest.fixture
def torus_query(torus_stratum, torus_type):
    return CountQuery(stratum=torus_stratum, gamma1=torus_type, lmax=4)


def test_census_csv(torus_stratum, store):
    output = CountRunner(CountQuery(stratum=torus_stratum, lmax=2), OutputFormat.CSV, store).census()
    lines = output.text.splitlines()
    assert "# Stratum=sigma=[0];eps=1" in lines
    assert "# classes=4" in lines
    body = [line for line in lines if not line.startswith("#")]
    assert body[0].startswith("area,code,sigma")
    assert len(body) == 5
    assert not output.partial


def test_census_json(torus_stratum, store):
    output = CountRunner(CountQuery(stratum=torus_stratum, lmax=1), OutputFormat.JSON, store).census()
    payload = json.loads(output.text)
    assert payload["classes"] == "1"
    assert len(payload["records"]) == 1


def test_partial_census(torus_stratum):
    output = CountRunner(CountQuery(stratum=torus_stratum, lmax=6), OutputFormat.CSV, CensusStore(max_surfaces=5)).census()
    assert output.partial
    assert "# partial=True" in output.text.splitlines()


def test_count_lattice_and_direct_agree(torus_query, store):
    runner = CountRunner(torus_query, OutputFormat.CSV, store)
    lattice = runner.count(CountingEngine.LATTICE).text.splitlines()
    direct = runner.count(CountingEngine.DIRECT).text.splitlines()
    assert lattice[0] == "L,count,engine,gamma1,gamma2,stratum,component"
    assert [line.split(",")[:2] for line in lattice] == [line.split(",")[:2] for line in direct]
    assert lattice[-1].startswith("4,10,lattice,")


def test_volume(torus_query, store):
    assert CountRunner(torus_query, OutputFormat.CSV, store).volume().text == "1/2 (0.5)\n"
    payload = json.loads(CountRunner(torus_query, OutputFormat.JSON, store).volume().text)
    assert payload["volume"] == "1/2"
    assert len(payload["charts"]) == 1


def test_volume_needs_type(torus_stratum, store):
    with pytest.raises(UsageError):
        CountRunner(CountQuery(stratum=torus_stratum), OutputFormat.CSV, store).volume()


def test_diagrams_of_surface(store):
    output = CountRunner(CountQuery(), OutputFormat.CSV, store).diagrams("h=(1,2)(3) v=(1,3)(2)")
    assert output.text.count("top:") == 2
    assert "# widths=" in output.text
    chart = output.payloads["diagrams"][0]["chart"]
    assert "Subject To" in chart


def test_diagrams_of_type(torus_query, store):
    payload = json.loads(CountRunner(torus_query, OutputFormat.JSON, store).diagrams().text)
    assert len(payload) == 1
    assert payload[0]["dimension"] == 2


def test_fit_round_trip(tmp_path, store):
    series = CountSeries([(l, 2 * l ** 2) for l in range(1, 31)], CountingEngine.DIRECT)
    path = tmp_path / "series.csv"
    path.write_text(series_to_text(series, OutputFormat.CSV))
    assert read_series_csv(path).points == series.points

    output = CountRunner(CountQuery(), OutputFormat.CSV, store).fit(path, 2)
    rows = dict(line.split(",", 1) for line in output.text.splitlines()[1:])
    assert float(rows["v_hat"]) == pytest.approx(2)
    assert rows["window"] == "3-30"


def test_fit_needs_exponent(tmp_path, store):
    path = tmp_path / "series.csv"
    path.write_text(series_to_text(CountSeries([(1, 1)], CountingEngine.DIRECT), OutputFormat.CSV))
    with pytest.raises(UsageError):
        CountRunner(CountQuery(), OutputFormat.CSV, store).fit(path, None)


def test_read_series_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_series_csv(path)


def test_verify_flags_failures(monkeypatch, store):
    monkeypatch.setattr(Verifier, "run", lambda self: [
        CheckResult("round_trip", True, "ok"),
        CheckResult("leading_constant_product", False, "off", diagnostic=True),
    ])
    assert not CountRunner(CountQuery(), OutputFormat.CSV, store).verify().failed

    monkeypatch.setattr(Verifier, "run", lambda self: [CheckResult("lipschitz", False, "1 of 2 cells failed")])
    output = CountRunner(CountQuery(), OutputFormat.CSV, store).verify()
    assert output.failed
    assert output.text == "FAIL lipschitz: 1 of 2 cells failed\n"


def test_export(tmp_path, torus_stratum, store):
    runner = CountRunner(CountQuery(stratum=torus_stratum, lmax=2), OutputFormat.CSV, store, tmp_path)
    folder = runner.export(runner.census(), "census")
    census_csv = (folder / "csv" / "census_census.csv").read_text().splitlines()
    assert census_csv[0].startswith("# Stratum=")
    assert (folder / "json" / "run_metadata.json").exists()
    assert (folder / "text" / "census.csv").exists()


def test_no_export_without_path(store):
    runner = CountRunner(CountQuery(lmax=1), OutputFormat.CSV, store)
    assert runner.export(runner.census(), "census") is None
