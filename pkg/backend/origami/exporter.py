import csv
import logging
from pathlib import Path

import polars as pl

from backend.core.models import CSVReport
from backend.utils.saving import save_csv, save_json

logger = logging.getLogger(__name__)


class Exporter:
    """
    Handles exporting of census listings, count series and reports to a timestamped directory
    structure.

    Folder structure:
    - base_path / <timestamp> / csv / ...
    - base_path / <timestamp> / json / ...
    - base_path / <timestamp> / text / ...
    """

    def __init__(self, base_path: Path, timestamp: str):
        """
        Initializes the exporter with a timestamped folder.

        Args:
            base_path (Path): Root output directory.
            timestamp (str): Timestamp string used to uniquely identify this run.
        """
        self.timestamped_folder = self._create_timestamped_folder(base_path, timestamp)

    @staticmethod
    def _create_timestamped_folder(base_path: Path, timestamp: str) -> Path:
        """
        Creates a new subfolder for the current run using the timestamp.

        Raises:
            FileExistsError: If a folder with the same timestamp already exists.
        """
        new_folder_path = base_path / timestamp
        new_folder_path.mkdir(parents=True, exist_ok=False)
        return new_folder_path

    def save_report_to_csv(self, csv_report: CSVReport, file_name: str) -> Path:
        """
        Saves a structured report (with comments) to a CSV file.

        Args:
            csv_report (CSVReport): A report object containing headers, rows, and comments.
            file_name (str): Name of the file (without extension).

        Returns:
            Path: The written file.
        """
        save_path = self.timestamped_folder / 'csv' / f'{file_name}.csv'
        save_path.parent.mkdir(parents=True, exist_ok=True)

        with open(save_path, mode='w', newline='', encoding='utf-8') as f:
            # Comment lines go out verbatim, unquoted
            for line in csv_report.comments:
                f.write(line + "\n")
            writer = csv.writer(f)
            writer.writerow(csv_report.headers)
            writer.writerows(csv_report.rows)

        logger.info("Exported %s to %s", file_name, save_path)
        return save_path

    def save_dataframe_to_csv(self, dataframe: pl.DataFrame, file_name: str) -> Path:
        save_path = self.timestamped_folder / 'csv' / f'{file_name}.csv'
        save_csv(dataframe, save_path)
        return save_path

    def save_results_to_json(self, results: dict | list, file_name: str) -> Path:
        save_path = self.timestamped_folder / 'json' / f'{file_name}.json'
        save_json(results, save_path)
        return save_path

    def save_text(self, text: str, file_name: str, suffix: str = "txt") -> Path:
        """
        Raises:
            RuntimeError: If the file cannot be written.
        """
        save_path = self.timestamped_folder / 'text' / f'{file_name}.{suffix}'
        try:
            save_path.parent.mkdir(parents=True, exist_ok=True)
            save_path.write_text(text, encoding='utf-8')
        except OSError as e:
            raise RuntimeError(f"Failed to save text to {save_path}: {e}") from e
        logger.info("Exported %s to %s", file_name, save_path)
        return save_path
