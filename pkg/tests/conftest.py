import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
ROOT = TESTS.parent
EPFL = ROOT / "benchmarks" / "epfl"

sys.path.insert(0, str(TESTS))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def epfl():
    return EPFL


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
