import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridmix.core import CarbonTable

DEMO_DIR = Path(__file__).parent.parent / "data" / "demo"
GOLDEN_DIR = Path(__file__).parent / "data" / "golden"


@pytest.fixture
def table() -> CarbonTable:
    return CarbonTable.default()


@pytest.fixture
def demo_dir() -> Path:
    return DEMO_DIR


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR
