import re

import polars as pl
import pytest

from backend.utils.saving import generate_timestamp, save_csv, save_json
from backend.utils.sharding import run_sharded, split_round_robin
from backend.utils.timing import timing


def _square(x: int) -> int:
    return x * x


def test_split_round_robin():
    assert split_round_robin([1, 2, 3, 4, 5], 2) == [[1, 3, 5], [2, 4]]
    assert split_round_robin([1], 4) == [[1]]
    assert split_round_robin([], 3) == []


def test_run_sharded_keeps_order():
    assert run_sharded(_square, range(6), 1) == [0, 1, 4, 9, 16, 25]
    assert run_sharded(_square, range(6), 2) == [0, 1, 4, 9, 16, 25]


def test_timing_records_on_error():
    timings = {}
    with pytest.raises(KeyError):
        with timing("lookup", timings):
            raise KeyError("missing")
    assert timings["lookup"] >= 0


def test_timestamp_format():
    assert re.fullmatch(r"\d{8}_\d{6}", generate_timestamp())


def test_save_helpers(tmp_path):
    save_csv(pl.DataFrame({"a": [1]}), tmp_path / "nested" / "a.csv")
    save_json({"a": 1}, tmp_path / "nested" / "a.json")
    assert (tmp_path / "nested" / "a.csv").exists()
    assert (tmp_path / "nested" / "a.json").read_text().startswith("{")


def test_save_csv_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(RuntimeError):
        save_csv(pl.DataFrame({"a": [1]}), blocker / "a.csv")
