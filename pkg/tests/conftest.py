"""
Shared fixtures for the troptrans test-suite.
"""

import os
import sys

import pytest

# Make the project packages importable when pytest runs from any directory
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from algebra.tropical_core import TropMatrix  # noqa: E402
from utils.instance_library import InstanceLibrary  # noqa: E402


@pytest.fixture(scope="session")
def library() -> InstanceLibrary:
    return InstanceLibrary()


@pytest.fixture(scope="session")
def schwarz(library) -> TropMatrix:
    return library.get_matrix("schwarz7")


@pytest.fixture(scope="session")
def wielandt5(library) -> TropMatrix:
    return library.get_matrix("wielandt5")


@pytest.fixture(scope="session")
def dulmage_mendelsohn5(library) -> TropMatrix:
    return library.get_matrix("dulmage_mendelsohn5")


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Point configuration and run storage at a temporary directory."""
    for var in ("TROPTRANS_THREADS", "TROPTRANS_FLOAT_TOLERANCE", "TROPTRANS_LOG_LEVEL", "TROPTRANS_MATRIX_CAP"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("TROPTRANS_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.chdir(tmp_path)
    return tmp_path
