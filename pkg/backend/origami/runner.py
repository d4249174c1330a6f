import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import polars as pl

from backend.core import constants
from backend.core.enums import CountingEngine, OutputFormat
from backend.core.errors import ResourceLimitExceeded, UsageError
from backend.core.models import CountQuery, CountSeries, CSVReport
from backend.core.parsers import format_fraction
from backend.utils.saving import generate_timestamp
from backend.utils.timing import timing
from .census_cache import CensusStore, records_to_dataframe
from .cylinder import decompose
from .diagrams import enumerate_diagrams
from .enumeration import CensusResult
from .exporter import Exporter
from .factory import CountingFactory
from .fitting import fit_power_law
from .surface import parse_surface_text, require_valid
from .train_track import build_chart
from .verify import Verifier
from .volume import total_volume

logger = logging.getLogger(__name__)


@dataclass
class RunOutput:
    """
    Everything a subcommand produced.

    Attributes:
        text (str): Document written to stdout.
        frames (dict[str, pl.DataFrame]): Tables exported as CSV under --out.
        reports (dict[str, CSVReport]): Tables exported as CSV with a comment header.
        payloads (dict[str, dict | list]): Documents exported as JSON under --out.
        partial (bool): A resource limit cut the enumeration short.
        failed (bool): A verification check failed.
    """
    text: str
    frames: dict[str, pl.DataFrame] = field(default_factory=dict)
    reports: dict[str, CSVReport] = field(default_factory=dict)
    payloads: dict[str, dict | list] = field(default_factory=dict)
    partial: bool = False
    failed: bool = False


def _comment_block(values: dict[str, str]) -> str:
    return "".join(f"# {key}={value}\n" for key, value in values.items())


def series_to_text(series: CountSeries, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        return json.dumps(series_to_payload(series), indent=2)
    header = _comment_block({"partial": "True"}) if series.partial else ""
    return header + series.to_dataframe().select(constants.SERIES_COLUMNS).write_csv()


def series_to_payload(series: CountSeries) -> dict:
    return {
        "engine": series.engine.value,
        "gamma1": series.gamma1,
        "gamma2": series.gamma2,
        "stratum": series.stratum,
        "component": series.component,
        "partial": series.partial,
        "points": [{"L": l_value, "count": count} for l_value, count in series.points],
    }


def read_series_csv(path: Path) -> CountSeries:
    """
    Load a count series written by count-direct or count-lattice.

    Raises:
        RuntimeError: If the file cannot be read.
        ValueError: If required columns are missing.
    """
    try:
        data = pl.read_csv(path, comment_prefix="#")
    except Exception as e:
        raise RuntimeError(f"Failed to read count series from {path}: {e}") from e
    missing = {"L", "count"} - set(data.columns)
    if missing:
        raise ValueError(f"{path} lacks columns {sorted(missing)}")
    first = data.row(0, named=True) if data.height else {}
    engine = first.get("engine", CountingEngine.DIRECT.value)
    return CountSeries(
        points=list(zip(data["L"].to_list(), data["count"].to_list())),
        engine=CountingEngine(engine),
        gamma1=first.get("gamma1", constants.ANY_TYPE),
        gamma2=first.get("gamma2", constants.ANY_TYPE),
        stratum=first.get("stratum", constants.ANY_TYPE),
        component=first.get("component", "any"),
    )


class CountRunner:
    """
    Run one subcommand end to end: build the engine, produce the output document and, when a
    base path is given, export the artifacts to a timestamped folder.

    Args:
        query (CountQuery): Shared query parameters.
        output_format (OutputFormat): Format of the stdout document.
        store (CensusStore): Census provider.
        base_save_path (Path | None): Root for exported artifacts, None to skip exporting.
    """

    def __init__(self, query: CountQuery, output_format: OutputFormat, store: CensusStore, base_save_path: Path | None = None):
        self.query = query
        self.output_format = output_format
        self.store = store
        self.base_save_path = base_save_path
        self.timestamp = generate_timestamp()
        self.timings: dict[str, float] = {}

    # --- Subcommands ---

    def census(self) -> RunOutput:
        with timing("census", self.timings):
            try:
                result = self.store.get(self.query.stratum, self.query.labeled, self.query.lmax)
            except ResourceLimitExceeded as e:
                if e.partial is None:
                    raise
                logger.warning("%s", e)
                result = e.partial

        frame = records_to_dataframe(result.records)
        header = self._census_header(result)
        if self.output_format is OutputFormat.JSON:
            text = json.dumps({**header, "records": frame.to_dicts()}, indent=2)
        else:
            text = _comment_block(header) + frame.write_csv()
        report = CSVReport(
            comments=[f"# {key}={value}" for key, value in header.items()],
            headers=frame.columns,
            rows=frame.rows(),
        )
        return RunOutput(text, reports={"census": report}, payloads={"census_header": header}, partial=result.partial)

    def _census_header(self, result: CensusResult) -> dict[str, str]:
        header = {**self.query.to_flat_dict(), "Lmax": str(result.lmax), "classes": str(len(result.records))}
        if result.partial:
            header["partial"] = "True"
        if self.query.labeled and not result.partial:
            unlabeled = self.store.get(self.query.stratum, False, result.lmax)
            if len(unlabeled.records) != len(result.records):
                header["unlabeled_classes"] = str(len(unlabeled.records))
        return header

    def count(self, engine: CountingEngine) -> RunOutput:
        with timing(engine.value, self.timings):
            series = CountingFactory.get_engine(engine, self.query, self.store).run()
        return RunOutput(
            series_to_text(series, self.output_format),
            frames={"series": series.to_dataframe()},
            payloads={"series": series_to_payload(series)},
            partial=series.partial,
        )

    def volume(self) -> RunOutput:
        """
        Exact leading constant v(gamma, Q) of the horizontal type given as gamma1 (or gamma2).

        Raises:
            UsageError: If no stratum or type is given.
        """
        gamma = self._single_type()
        with timing("volume", self.timings):
            diagrams = [item.diagram for item in enumerate_diagrams(self.query.stratum, self.query.component, gamma, self.store)]
            result = total_volume(diagrams)
        payload = {
            "stratum": self.query.stratum_label(),
            "component": self.query.component.value,
            "gamma": gamma,
            "volume": str(result.total),
            "decimal": float(result.total),
            "degenerate_charts": result.degenerate,
            "charts": [chart.to_dict() for chart in result.charts],
        }
        if self.output_format is OutputFormat.JSON:
            text = json.dumps(payload, indent=2)
        else:
            text = format_fraction(result.total, constants.DECIMAL_PRECISION) + "\n"
        return RunOutput(text, payloads={"volume": payload})

    def diagrams(self, surface_text: str | None = None) -> RunOutput:
        """
        Diagrams of a horizontal type, or the decomposition of one surface, each with its chart.
        """
        if surface_text is not None:
            surface = require_valid(parse_surface_text(surface_text))
            diagram, params = decompose(surface)
            entries = [(diagram, params)]
        else:
            gamma = self._single_type()
            entries = [
                (item.diagram, item.sample)
                for item in enumerate_diagrams(self.query.stratum, self.query.component, gamma, self.store)
            ]

        payload = []
        for diagram, params in entries:
            payload.append({
                "diagram": diagram.to_text(),
                "dimension": diagram.dimension(),
                "widths": [str(w) for w in params.widths] if params else None,
                "twists": [str(s) for s in params.twists] if params else None,
                "chart": build_chart(diagram).to_lp_text(),
            })
        if self.output_format is OutputFormat.JSON:
            text = json.dumps(payload, indent=2)
        else:
            blocks = []
            for entry in payload:
                lines = [entry["diagram"]]
                if entry["widths"] is not None:
                    lines.append(f"# widths={' '.join(entry['widths'])} twists={' '.join(entry['twists'])}")
                blocks.append("\n".join(lines))
            text = "\n\n".join(blocks) + "\n" if blocks else ""
        return RunOutput(text, payloads={"diagrams": payload})

    def verify(self) -> RunOutput:
        with timing("verify", self.timings):
            results = Verifier(self.query, self.store).run()
        failed = any(not r.passed and not r.diagnostic for r in results)
        payload = [r.to_dict() for r in results]
        if self.output_format is OutputFormat.JSON:
            text = json.dumps({"passed": not failed, "checks": payload}, indent=2)
        else:
            lines = []
            for r in results:
                status = "INFO" if r.diagnostic else ("PASS" if r.passed else "FAIL")
                lines.append(f"{status} {r.name}: {r.detail}")
            text = "\n".join(lines) + "\n"
        return RunOutput(text, payloads={"verify": payload}, failed=failed)

    def fit(self, input_path: Path, h: int | None) -> RunOutput:
        series = read_series_csv(input_path)
        if h is None:
            if self.query.stratum is None:
                raise UsageError("fit needs --h or --stratum to fix the exponent")
            h = self.query.stratum.h
        result = fit_power_law(series, h)
        payload = result.to_dict()
        if self.output_format is OutputFormat.CSV:
            text = "key,value\n" + "".join(f"{key},{value}\n" for key, value in payload.items() if key != "window")
            text += f"window,{payload['window'][0]}-{payload['window'][1]}\n"
        else:
            text = json.dumps(payload, indent=2)
        return RunOutput(text, payloads={"fit": payload})

    # --- Export ---

    def export(self, output: RunOutput, name: str) -> Path | None:
        """
        Save the artifacts of a run under base_save_path/<timestamp>.

        Returns:
            Path | None: The run folder, None when exporting is disabled.
        """
        if self.base_save_path is None:
            return None
        exporter = Exporter(self.base_save_path, self.timestamp)
        for frame_name, frame in output.frames.items():
            exporter.save_dataframe_to_csv(frame, f"{name}_{frame_name}")
        for report_name, report in output.reports.items():
            exporter.save_report_to_csv(report, f"{name}_{report_name}")
        for payload_name, payload in output.payloads.items():
            exporter.save_results_to_json(payload, f"{name}_{payload_name}")
        exporter.save_results_to_json(
            {"query": self.query.to_flat_dict(), "timings": self.timings, "partial": output.partial}, "run_metadata"
        )
        suffix = "json" if self.output_format is OutputFormat.JSON else "csv"
        exporter.save_text(output.text, name, suffix)
        return exporter.timestamped_folder

    def _single_type(self) -> str:
        if self.query.stratum is None:
            raise UsageError("This subcommand needs --stratum")
        gamma = self.query.gamma2 or self.query.gamma1
        if gamma is None:
            raise UsageError("This subcommand needs a multicurve type (--gamma2 or --gamma1)")
        return gamma
