import json
import logging
from datetime import datetime
from pathlib import Path

import polars as pl

logger = logging.getLogger(__name__)


def generate_timestamp() -> str:
    """
    Generate a timestamp string representing the current date and time.

    Returns:
        str: The current timestamp in the format 'YYYYMMDD_HHMMSS'.
    """
    return datetime.now().strftime('%Y%m%d_%H%M%S')


def save_csv(data: pl.DataFrame, save_path: Path) -> None:
    """
    Save a Polars DataFrame as a CSV file, creating parent directories if needed.

    Args:
        data (pl.DataFrame): The DataFrame to save.
        save_path (Path): The full file path where the CSV should be saved.

    Raises:
        RuntimeError: If writing the CSV file fails.
    """
    try:
        save_path.parent.mkdir(parents=True, exist_ok=True)
        data.write_csv(save_path)
        logger.info("Data saved to %s", save_path)
    except Exception as e:
        raise RuntimeError(f"Failed to save CSV to {save_path}: {e}") from e


def save_json(payload: dict | list, save_path: Path) -> None:
    """
    Save a JSON document with two-space indentation.

    Raises:
        RuntimeError: If writing the file fails.
    """
    try:
        save_path.parent.mkdir(parents=True, exist_ok=True)
        with open(save_path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
        logger.info("Data saved to %s", save_path)
    except Exception as e:
        raise RuntimeError(f"Failed to save JSON to {save_path}: {e}") from e
