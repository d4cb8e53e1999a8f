"""Shared fixtures: the family corpus and precomputed transport gauges."""

import math

import pytest

from berrydet import (
    DiagConstFamily,
    SpinHalfFamily,
    build_periodic_gauge,
    kato_evolve,
    random_gapped,
)

# one line per acceptance criterion, echoed after the test summary so the
# verdicts are visible without -s (see tests/test_acceptance.py)
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spin_third():
    return SpinHalfFamily(math.pi / 3)


@pytest.fixture(scope="session")
def diag_pm():
    return DiagConstFamily([1.0, -1.0])


@pytest.fixture(scope="session")
def random4():
    return random_gapped(4, seed=0, nminus=2)


@pytest.fixture(scope="session")
def random6():
    return random_gapped(6, seed=0, nminus=3)


@pytest.fixture(scope="session")
def corpus(spin_third, diag_pm, random4, random6):
    return [("spin_third", spin_third), ("diag_pm", diag_pm),
            ("random4", random4), ("random6", random6)]


def _gauge(fam):
    path = kato_evolve(fam, steps=2048)
    return build_periodic_gauge(path, path.split0)


@pytest.fixture(scope="session")
def spin_gauge(spin_third):
    return _gauge(spin_third)


@pytest.fixture(scope="session")
def diag_gauge(diag_pm):
    return _gauge(diag_pm)


@pytest.fixture(scope="session")
def random4_gauge(random4):
    return _gauge(random4)


@pytest.fixture(scope="session")
def random6_gauge(random6):
    return _gauge(random6)


@pytest.fixture(scope="session")
def gauges(spin_gauge, diag_gauge, random4_gauge, random6_gauge):
    return {"spin_third": spin_gauge, "diag_pm": diag_gauge,
            "random4": random4_gauge, "random6": random6_gauge}
