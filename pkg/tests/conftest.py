from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chpricing import DayProfile, DemandModel, builtin_fleet, default_profile

_criterion_verdicts = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criterion_verdicts.append((marker.args[0], marker.args[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_verdicts:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for number, description, ok in sorted(_criterion_verdicts):
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{tag}] criterion {number}: {description}")


# demand-model parameters of the two builtin experiments
GRIBIK_MODEL = dict(a=3.9e4, mu1=0.8, mu2=0.2, nu=0.01, utility_constant=20000.0)
SCARF_MODEL = dict(a=455.0, mu1=0.8, mu2=0.2, nu=0.0025, utility_constant=500.0)
MEAN_D1 = 41086.7


@pytest.fixture(scope="session")
def gribik():
    return builtin_fleet("gribik")


@pytest.fixture(scope="session")
def scarf():
    return builtin_fleet("scarf")


@pytest.fixture(scope="session")
def gribik_model():
    return DemandModel(**GRIBIK_MODEL)


@pytest.fixture(scope="session")
def scarf_model():
    return DemandModel(**SCARF_MODEL)


@pytest.fixture(scope="session")
def mean_profile():
    """Flat day at the mean base demand, no noise."""
    return DayProfile((MEAN_D1,) * 24)


@pytest.fixture(scope="session")
def day_profile():
    """The bundled diurnal profile, no noise."""
    return default_profile()
