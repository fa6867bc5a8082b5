import numpy as np
import pytest

# Filled by tests/test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(0xC1F)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
