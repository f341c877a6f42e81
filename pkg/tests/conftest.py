import os

import pytest
from hypothesis import HealthCheck, settings

from lintersect._backend import available_backends

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", params=available_backends())
def backend(request):
    return request.param


# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        title, verdict, detail = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d} {verdict}: {title}" + (f" ({detail})" if detail else ""))
