import time

import pytest

from sparse10adic.cli import DEFAULT_DIGITS
from sparse10adic.greedy_engine import GreedyEngine

# filled by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def timed_full_run():
    """The 1014-digit run from p1 = 3 (seed plus 1013 odd digits) and its wall time."""
    t0 = time.perf_counter()
    record = GreedyEngine().run(3, DEFAULT_DIGITS)
    return record, time.perf_counter() - t0


@pytest.fixture(scope="session")
def full_run(timed_full_run):
    return timed_full_run[0]


@pytest.fixture(scope="session")
def short_runs():
    engine = GreedyEngine()
    return {p1: engine.run(p1, 200) for p1 in (1, 2, 3, 4, 103, 903)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
