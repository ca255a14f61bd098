"""Shared fixtures for the lehmancert test suite."""

import copy
import os
import sys
from pathlib import Path

import pytest

# Ensure project root importable
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from lehmancert import config as lc_config
from lehmancert.zero_catalog import ZeroCatalog, load_catalog, load_text

DATA_DIR = Path(__file__).parent / "data"
FIRST30 = DATA_DIR / "zeros_first30.txt"


@pytest.fixture(autouse=True)
def default_config():
    """Run every test against the built-in defaults, independent of ./config.yaml."""
    lc_config.set_config(copy.deepcopy(lc_config.DEFAULTS))
    yield
    lc_config.reset_config()


@pytest.fixture
def first30() -> ZeroCatalog:
    return load_text(FIRST30)


@pytest.fixture(scope="session")
def large_catalog() -> ZeroCatalog:
    """Catalog named by LEHMANCERT_ZEROS_FILE (at least 1e5 zeros), else skip."""
    path = os.environ.get("LEHMANCERT_ZEROS_FILE")
    if not path:
        pytest.skip("LEHMANCERT_ZEROS_FILE not set")
    catalog = load_catalog(path)
    if len(catalog) < 100_000:
        pytest.skip("LEHMANCERT_ZEROS_FILE holds fewer than 1e5 zeros")
    return catalog


@pytest.fixture(scope="session")
def catalog_2m() -> ZeroCatalog:
    path = os.environ.get("LEHMANCERT_ZEROS_2M")
    if not path:
        pytest.skip("LEHMANCERT_ZEROS_2M not set")
    return load_catalog(path)
