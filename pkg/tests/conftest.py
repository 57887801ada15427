from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from thermopipe import BoundaryConditions, Signal

settings.register_profile("pkg", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"

_ACCEPTANCE_LINES = []


@pytest.fixture
def ramp_bc():
    """Inlet ramp 20 -> 60 degC over 50 s, ambient 30 -> 20 degC over 200 s, v = 0.5 m/s."""
    return BoundaryConditions(0.5, Signal.ramp(0, 50, 20, 60, name="Tin"), Signal.ramp(0, 200, 30, 20, name="Tamb"))


@pytest.fixture
def acceptance_line():
    def record(text):
        _ACCEPTANCE_LINES.append(text)
        print(text)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
