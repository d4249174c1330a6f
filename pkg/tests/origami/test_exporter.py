import json

import polars as pl
import pytest

from backend.core.models import CSVReport
from backend.origami.exporter import Exporter


def test_folder_layout(tmp_path):
    exporter = Exporter(tmp_path, "20260101_120000")
    csv_path = exporter.save_dataframe_to_csv(pl.DataFrame({"L": [1, 2], "count": [1, 4]}), "series")
    json_path = exporter.save_results_to_json({"volume": "1/2"}, "volume")
    text_path = exporter.save_text("1/2 (0.5)\n", "volume")

    assert csv_path == tmp_path / "20260101_120000" / "csv" / "series.csv"
    assert pl.read_csv(csv_path)["count"].to_list() == [1, 4]
    assert json.loads(json_path.read_text()) == {"volume": "1/2"}
    assert text_path.suffix == ".txt"


def test_report_keeps_comment_lines(tmp_path):
    report = CSVReport(comments=["# Stratum=sigma=[2,2];eps=1"], headers=["area", "code"], rows=[(4, "4/x")])
    path = Exporter(tmp_path, "run").save_report_to_csv(report, "census")
    lines = path.read_text().splitlines()
    assert lines[0] == "# Stratum=sigma=[2,2];eps=1"
    assert lines[1] == "area,code"
    assert pl.read_csv(path, comment_prefix="#")["area"].to_list() == [4]


def test_existing_run_folder(tmp_path):
    Exporter(tmp_path, "run")
    with pytest.raises(FileExistsError):
        Exporter(tmp_path, "run")
