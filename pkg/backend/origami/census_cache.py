import logging
from pathlib import Path

import polars as pl

from backend.core import constants
from backend.core.errors import CacheMismatch
from backend.core.models import ComponentTag, Stratum
from backend.core.paths import get_cache_file_path
from .enumeration import CensusRecord, CensusResult, census

logger = logging.getLogger(__name__)

CACHE_SCHEMA = {
    "area": pl.Int64,
    "code": pl.String,
    "sigma": pl.String,
    "genus": pl.Int64,
    "epsilon": pl.Int64,
    "hyperelliptic": pl.Boolean,
    "spin_parity": pl.Int64,
    "classified": pl.Boolean,
    "horizontal": pl.String,
    "vertical": pl.String,
}


def records_to_dataframe(records: list[CensusRecord]) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "area": [r.area for r in records],
            "code": [r.code for r in records],
            "sigma": [".".join(map(str, r.sigma)) for r in records],
            "genus": [r.genus for r in records],
            "epsilon": [r.epsilon for r in records],
            "hyperelliptic": [r.tag.hyperelliptic for r in records],
            "spin_parity": [r.tag.spin_parity for r in records],
            "classified": [r.tag.classified for r in records],
            "horizontal": [r.horizontal for r in records],
            "vertical": [r.vertical for r in records],
        },
        schema=CACHE_SCHEMA,
    ).select(constants.CACHE_COLUMNS)


def dataframe_to_records(data: pl.DataFrame) -> list[CensusRecord]:
    return [
        CensusRecord(
            area=row["area"],
            code=row["code"],
            sigma=tuple(int(x) for x in row["sigma"].split(".")),
            genus=row["genus"],
            epsilon=row["epsilon"],
            tag=ComponentTag(row["hyperelliptic"], row["spin_parity"], row["classified"]),
            horizontal=row["horizontal"],
            vertical=row["vertical"],
        )
        for row in data.iter_rows(named=True)
    ]


def _header(result: CensusResult) -> dict[str, str]:
    return {
        "version": str(constants.CACHE_FORMAT_VERSION),
        "stratum": result.stratum.label() if result.stratum is not None else constants.ANY_TYPE,
        "labeled": str(result.labeled),
        "lmax": str(result.lmax),
        "partial": str(result.partial),
    }


def write_cache(path: Path, result: CensusResult) -> None:
    """
    Write a census as a magic line, ``# key=value`` header lines and a CSV body sorted by
    (area, code).

    Raises:
        RuntimeError: If the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        body = records_to_dataframe(sorted(result.records, key=lambda r: r.sort_key)).write_csv()
        lines = [constants.CACHE_MAGIC] + [f"# {key}={value}" for key, value in _header(result).items()]
        path.write_text("\n".join(lines) + "\n" + body, encoding="utf-8")
    except OSError as e:
        raise RuntimeError(f"Failed to write census cache to {path}: {e}") from e
    logger.info("Census cache written to %s (%d records)", path, len(result.records))


def read_header(path: Path) -> dict[str, str]:
    """
    Raises:
        CacheMismatch: If the magic line or the format version is wrong.
    """
    header = {}
    with open(path, encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
        if first != constants.CACHE_MAGIC:
            raise CacheMismatch(f"{path} is not a census cache (first line '{first}')")
        for line in f:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition("=")
            header[key] = value
    if header.get("version") != str(constants.CACHE_FORMAT_VERSION):
        raise CacheMismatch(f"{path} has cache format version {header.get('version')}, expected {constants.CACHE_FORMAT_VERSION}")
    return header


def read_cache(path: Path, stratum: Stratum | None, labeled: bool, lmax: int) -> CensusResult:
    """
    Load a cache written for the same stratum and labelling, covering at least ``lmax``.

    Raises:
        CacheMismatch: If the header disagrees with the query or the cache is partial or too small.
    """
    header = read_header(path)
    expected = stratum.label() if stratum is not None else constants.ANY_TYPE
    if header.get("stratum") != expected:
        raise CacheMismatch(f"{path} holds stratum {header.get('stratum')}, query asks for {expected}")
    if header.get("labeled") != str(labeled):
        raise CacheMismatch(f"{path} was built with labeled={header.get('labeled')}, query asks for labeled={labeled}")
    if header.get("partial") != "False":
        raise CacheMismatch(f"{path} holds a partial census")
    cached_lmax = int(header.get("lmax", "0"))
    if cached_lmax < lmax:
        raise CacheMismatch(f"{path} covers areas up to {cached_lmax}, query needs {lmax}")

    data = pl.read_csv(path, comment_prefix="#", schema_overrides=CACHE_SCHEMA)
    records = dataframe_to_records(data.filter(pl.col("area") <= lmax))
    return CensusResult(records, lmax, stratum, labeled)


class CensusStore:
    """
    Census provider backed by cache files, rebuilding and rewriting a cache that is missing or
    too small.

    Args:
        cache_dir (Path | None): Folder of cache files, None keeps everything in memory.
        jobs (int): Worker processes for enumeration.
        max_surfaces (int | None): Enumeration resource limit.
        quiet (bool): Disable progress bars.
    """

    def __init__(self, cache_dir: Path | None = None, jobs: int = 1, max_surfaces: int | None = None, quiet: bool = True):
        self.cache_dir = cache_dir
        self.jobs = jobs
        self.max_surfaces = max_surfaces
        self.quiet = quiet
        self._memory: dict[tuple, CensusResult] = {}

    def get(self, stratum: Stratum | None, labeled: bool, lmax: int) -> CensusResult:
        key = (stratum, labeled)
        held = self._memory.get(key)
        if held is not None and held.lmax >= lmax:
            return _trimmed(held, lmax)

        path = None
        if self.cache_dir is not None:
            label = stratum.label() if stratum is not None else constants.ANY_TYPE
            path = get_cache_file_path(self.cache_dir, label, labeled)
            if path.exists():
                try:
                    result = read_cache(path, stratum, labeled, lmax)
                    self._memory[key] = result
                    return result
                except CacheMismatch as e:
                    logger.info("Rebuilding census: %s", e)

        result = census(lmax, stratum, labeled, self.jobs, self.max_surfaces, self.quiet)
        self._memory[key] = result
        if path is not None:
            write_cache(path, result)
        return result


def _trimmed(result: CensusResult, lmax: int) -> CensusResult:
    records = [r for r in result.records if r.area <= lmax]
    return CensusResult(records, lmax, result.stratum, result.labeled, result.partial)

