from pathlib import Path

# ---- Base Paths ----
BACKEND_DATA_ROOT_PATH = Path(__file__).parent.parent / "data"

CACHE_PATH = BACKEND_DATA_ROOT_PATH / "cache"
RUNS_PATH = BACKEND_DATA_ROOT_PATH / "runs"


# ---- Cache Helpers ----
def get_default_cache_dir() -> Path:
    return CACHE_PATH

def get_cache_file_path(cache_dir: Path, stratum_label: str, labeled: bool) -> Path:
    # Stratum labels contain brackets, commas and semicolons
    safe = stratum_label.replace("sigma=[", "s").replace("];eps=", "_e").replace(",", ".").replace("*", "all")
    suffix = "_labeled" if labeled else ""
    return cache_dir / f"census_{safe}{suffix}.txt"


# ---- Run Results ----
def get_run_base_path() -> Path:
    return RUNS_PATH
