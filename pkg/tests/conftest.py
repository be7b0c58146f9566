import pytest
from hypothesis import HealthCheck, settings

from epwkit import verify
from epwkit.scenarios import fivefold_data, threefold_data

settings.register_profile(
    "epwkit", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci-fast", max_examples=20, deadline=None)
settings.load_profile("epwkit")


@pytest.fixture(scope="session")
def threefold():
    """Threefold data over F_13 (shared with the acceptance battery through its cache)."""
    return verify.threefold()


@pytest.fixture(scope="session")
def fivefold():
    return verify.fivefold()


@pytest.fixture(scope="session")
def threefold7():
    return threefold_data(7, 0)


@pytest.fixture(scope="session")
def fivefold7():
    return fivefold_data(7, 0)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.id):
            terminalreporter.write_line(r.line("full"))
