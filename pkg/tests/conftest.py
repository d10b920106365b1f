import dataclasses

import pytest
from hypothesis import HealthCheck, settings

from partasym.config import LIMITS

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def limits():
    saved = dataclasses.replace(LIMITS)
    yield LIMITS
    for f in dataclasses.fields(LIMITS):
        setattr(LIMITS, f.name, getattr(saved, f.name))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
