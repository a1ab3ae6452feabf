import pytest
from hypothesis import HealthCheck, settings

from ecsrgame.model import ModelParams

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def canonical() -> ModelParams:
    return ModelParams(A=1.0, alpha=0.5, gamma=0.5, d=1.0)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
