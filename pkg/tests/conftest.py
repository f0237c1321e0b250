import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("pgo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pgo")

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def fixture_dir() -> Path:
    return ROOT / "fixtures"
