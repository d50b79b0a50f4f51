import os
from fractions import Fraction as F

import hypothesis
import pytest

from matchfactor import DenseMatrix

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=60, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))

# the 3x3 bistochastic example, exact
EXAMPLE_33 = [
    [F(1, 3), F(1, 3), F(1, 3)],
    [F(0), F(2, 3), F(1, 3)],
    [F(2, 3), F(0), F(1, 3)],
]


@pytest.fixture
def example33_exact():
    return [row[:] for row in EXAMPLE_33]


@pytest.fixture
def example33():
    return DenseMatrix([[float(x) for x in row] for row in EXAMPLE_33])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
