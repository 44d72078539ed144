import numpy as np
import pytest

from fgmagic import linalg
from fgmagic.gaussian import rotate, vacuum_covariance

ACCEPTANCE_LINES = []


def random_pure(L, rng, special=True):
    """Random pure state together with the rotation that made it."""
    O = linalg.haar_orthogonal(2 * L, rng, special=special)
    return rotate(vacuum_covariance(L), O), O


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report():
    """Record a pass/fail line for the terminal summary and return the verdict."""

    def _report(criterion, ok, detail):
        line = f"acceptance {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
