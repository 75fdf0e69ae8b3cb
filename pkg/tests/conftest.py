import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def fixture_path():
    def get(name):
        return FIXTURES / f"{name}.json"

    return get
