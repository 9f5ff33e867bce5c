import math

import pytest

from polycc.solver import solve_h

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def solved_points():
    """Equal-ring solutions for N = 2..10 at both admissible twists."""
    out = []
    for N in range(2, 11):
        for theta in (math.pi / N, 0.0):
            res = solve_h(N, theta)
            assert res.found
            out.append(res)
    return out


@pytest.fixture
def acceptance_line():
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
