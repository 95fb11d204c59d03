import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from helpers import rainbow  # noqa: E402


@pytest.fixture(scope="session")
def k9():
    return rainbow(9, 3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record a PASS/FAIL line; lines are echoed live and repeated in the terminal summary."""

    def emit(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        sys.__stdout__.write("\n" + line + "\n")
        sys.__stdout__.flush()

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
