#!/usr/bin/env python3
"""
Test Data Storage Functionality
Verifies that timestamped run storage keeps suite reports and metadata apart
"""

import json

from utils.data_manager import DataManager


def test_data_storage(tmp_path):
    """Create a run, store a suite report, complete the run and read everything back."""
    data_manager = DataManager(str(tmp_path))

    run_id = data_manager.new_run({"suite": "main1", "trials": 5, "seed": 42})
    assert data_manager.get_latest_run_id() == run_id

    sample_report = {
        "suite": "main1",
        "trials": 5,
        "seed": 42,
        "instances_checked": 5,
        "violations": [],
        "passed": True,
    }
    path = data_manager.save_suite_report(run_id, "main1", sample_report)
    assert path == data_manager.get_run_path(run_id) / "main1" / "report.json"
    assert path.read_text(encoding="utf-8").endswith("\n")

    data_manager.complete_run(run_id, ["main1"])

    metadata = data_manager.load_metadata(run_id)
    assert metadata["status"] == "completed"
    assert metadata["suites"] == ["main1"]
    assert metadata["settings"]["seed"] == 42
    assert metadata["end_time"] is not None

    assert data_manager.load_suite_report(run_id, "main1") == sample_report
    assert data_manager.load_suite_report(run_id, "pumping") is None


def test_runs_in_the_same_second_get_distinct_ids(tmp_path):
    data_manager = DataManager(str(tmp_path))
    first = data_manager.new_run()
    second = data_manager.new_run()
    assert first != second
    assert data_manager.get_latest_run_id() == second
    assert len(list(data_manager.runs_dir.iterdir())) == 2


def test_failed_run_is_marked(tmp_path):
    data_manager = DataManager(str(tmp_path))
    run_id = data_manager.new_run()
    data_manager.complete_run(run_id, ["lemmas"], passed=False)
    assert data_manager.load_metadata(run_id)["status"] == "violations"


def test_reports_are_key_sorted(tmp_path):
    data_manager = DataManager(str(tmp_path))
    run_id = data_manager.new_run()
    path = data_manager.save_suite_report(run_id, "pumping", {"b": 1, "a": 2})
    text = path.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": 2, "b": 1}
