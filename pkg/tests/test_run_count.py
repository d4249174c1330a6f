import logging

import pytest

from backend import run_count
from backend.core.errors import UnclassifiedComponent
from backend.origami.runner import CountRunner

TORUS_TYPE = "V:g0p1b2;E:0-0w1"


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    for name in ("ORIGAMI_JOBS", "ORIGAMI_CACHE_DIR", "ORIGAMI_MAX_SURFACES", "ORIGAMI_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("backend.core.config.load_dotenv", lambda *args, **kwargs: False)
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


def body(text: str) -> list[str]:
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_census(capsys):
    assert run_count.run(["census", "--stratum", "H(0)", "--Lmax", "1", "--quiet"]) == run_count.EXIT_OK
    lines = body(capsys.readouterr().out)
    assert len(lines) == 2


def test_volume(capsys):
    assert run_count.run(["volume", "--stratum", "H(0)", "--gamma1", TORUS_TYPE]) == run_count.EXIT_OK
    assert capsys.readouterr().out.startswith("1/2")


def test_count_lattice(capsys):
    code = run_count.run(["count-lattice", "--stratum", "H(0)", "--gamma1", TORUS_TYPE, "--Lmax", "4", "--quiet"])
    assert code == run_count.EXIT_OK
    assert body(capsys.readouterr().out)[-1].startswith("4,10,lattice,")


def test_verify_torus(capsys):
    assert run_count.run(["verify", "--Lmax", "3", "--quiet"]) == run_count.EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["census", "--stratum", "H(oops)"],
    ["census", "--format", "xml"],
    ["census", "--labeled-singularities"],
    ["census", "--Lmax", "0"],
    ["volume", "--stratum", "H(0)"],
    ["unknown"],
    [],
])
def test_usage_errors(argv):
    assert run_count.run(argv) == run_count.EXIT_USAGE


def test_help():
    assert run_count.run(["--help"]) == run_count.EXIT_OK


def test_resource_limit(capsys):
    code = run_count.run(["census", "--stratum", "H(0)", "--Lmax", "6", "--max-surfaces", "5", "--quiet"])
    assert code == run_count.EXIT_RESOURCE
    captured = capsys.readouterr()
    assert "# partial=True" in captured.out
    assert "resource limit" in captured.err


def test_unclassified_component(monkeypatch):
    def unclassified(self):
        raise UnclassifiedComponent(self.query.stratum)

    monkeypatch.setattr(CountRunner, "census", unclassified)
    assert run_count.run(["census", "--stratum", "Q(1,1,1,1)"]) == run_count.EXIT_UNCLASSIFIED


def test_missing_fit_input(tmp_path):
    assert run_count.run(["fit", "--input", str(tmp_path / "absent.csv"), "--h", "2"]) == run_count.EXIT_FAILED


def test_export(tmp_path, capsys):
    code = run_count.run(["census", "--stratum", "H(0)", "--Lmax", "1", "--quiet", "--out", str(tmp_path)])
    assert code == run_count.EXIT_OK
    folders = list(tmp_path.iterdir())
    assert len(folders) == 1
    assert (folders[0] / "csv" / "census_census.csv").exists()
