from __future__ import annotations

import pytest

from matra.data import openclaw_path
from matra.io import load_model_path
from matra.model import ThreatModel


@pytest.fixture(scope="session")
def openclaw() -> ThreatModel:
    return load_model_path(openclaw_path())
