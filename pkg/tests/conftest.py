import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exitweight.codes import random_code, repetition_code, rm_code  # noqa: E402


@pytest.fixture(scope="session")
def rm13():
    return rm_code(1, 3)


@pytest.fixture(scope="session")
def small_codes():
    """Codes with n <= 10 for exhaustive subset checks."""
    return [repetition_code(4), rm_code(1, 3), rm_code(2, 3), random_code(10, 4, 5),
            random_code(9, 6, 11)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
