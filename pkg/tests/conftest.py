import math

import pytest

from schwarzmod import SchwarzParams, solve_ray

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    """Compile (or load from cache) the integrator before any timed test."""
    solve_ray(SchwarzParams(0.4, 0.3), 0.1)


@pytest.fixture
def report():
    """Record a one-line acceptance verdict, shown in the terminal summary."""

    def _report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


Q4_BETA = math.asin(1.0 / 3.0)
