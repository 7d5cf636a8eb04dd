"""
Data Manager for troptrans
Handles timestamp-isolated storage of verification runs with one folder per suite
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional


class DataManager:
    """
    Timestamp-isolated run storage.
    Each run gets a unique folder: data/runs/YYYY-MM-DD_HHMMSS/
    Each verification suite stores its report in its own subfolder.
    """

    def __init__(self, base_dir: str = None):
        """
        Initialize the data manager.

        Args:
            base_dir: Base directory for data storage. If None, uses project root/data.
        """
        if base_dir is None:
            # Assumes this file is in utils/
            project_root = Path(__file__).resolve().parent.parent
            base_dir = str(project_root / "data")

        self.base_dir = Path(base_dir).resolve()
        self.runs_dir = self.base_dir / "runs"
        self.latest_run_file = self.base_dir / "latest_run.txt"

        self.runs_dir.mkdir(parents=True, exist_ok=True)

    def new_run(self, settings: Optional[Dict[str, Any]] = None) -> str:
        """
        Create a new timestamped run directory.

        Args:
            settings: Parameters of the run (seed, trials, ...) recorded in the metadata

        Returns:
            run_id: Timestamp string in format YYYY-MM-DD_HHMMSS, with a numeric suffix
                    when a run with the same second already exists
        """
        run_id = datetime.now().strftime("%Y-%m-%d_%H%M%S")
        suffix = 1
        while (self.runs_dir / run_id).exists():
            suffix += 1
            run_id = f"{datetime.now().strftime('%Y-%m-%d_%H%M%S')}_{suffix}"
        (self.runs_dir / run_id).mkdir(parents=True)

        metadata = {
            "run_id": run_id,
            "start_time": datetime.now().isoformat(),
            "end_time": None,
            "status": "running",
            "settings": settings or {},
            "suites": []
        }
        self.save_metadata(run_id, metadata)
        self._update_latest_run(run_id)

        return run_id

    def save_suite_report(self, run_id: str, suite: str, report: Dict[str, Any]) -> Path:
        """
        Save the report of one suite.

        Args:
            run_id: The run identifier
            suite: Suite name (e.g., "main1")
            report: JSON-serializable report

        Returns:
            Path of the written report.json
        """
        suite_dir = self.runs_dir / run_id / suite
        suite_dir.mkdir(parents=True, exist_ok=True)

        report_path = suite_dir / "report.json"
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(report, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        return report_path

    def load_suite_report(self, run_id: str, suite: str) -> Optional[Dict[str, Any]]:
        report_path = self.runs_dir / run_id / suite / "report.json"
        if report_path.exists():
            with open(report_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        return None

    def save_metadata(self, run_id: str, metadata: Dict[str, Any]) -> None:
        """Save run metadata."""
        metadata_file = self.runs_dir / run_id / "metadata.json"
        with open(metadata_file, 'w', encoding='utf-8') as f:
            json.dump(metadata, f, indent=2, ensure_ascii=False)

    def load_metadata(self, run_id: str) -> Optional[Dict[str, Any]]:
        """Load metadata for a run."""
        metadata_file = self.runs_dir / run_id / "metadata.json"
        if metadata_file.exists():
            with open(metadata_file, 'r', encoding='utf-8') as f:
                return json.load(f)
        return None

    def complete_run(self, run_id: str, suites: List[str], passed: bool = True) -> None:
        """
        Mark a run as complete.

        Args:
            run_id: The run identifier
            suites: Suites that ran
            passed: False when any suite reported violations
        """
        metadata = self.load_metadata(run_id)
        if metadata:
            metadata["end_time"] = datetime.now().isoformat()
            metadata["status"] = "completed" if passed else "violations"
            metadata["suites"] = suites
            self.save_metadata(run_id, metadata)

    def get_latest_run_id(self) -> Optional[str]:
        """Get the latest run ID from latest_run.txt."""
        if self.latest_run_file.exists():
            with open(self.latest_run_file, 'r') as f:
                return f.read().strip()
        return None

    def _update_latest_run(self, run_id: str) -> None:
        with open(self.latest_run_file, 'w') as f:
            f.write(run_id)

    def get_run_path(self, run_id: str) -> Path:
        """Get the path for a specific run."""
        return self.runs_dir / run_id
