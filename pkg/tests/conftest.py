import random

import pytest

ACCEPTANCE = {}


def record(number, title, ok):
    """Remember one acceptance verdict and print it right away."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])


@pytest.fixture
def rng():
    return random.Random(20240601)
