import numpy as np
import pytest


@pytest.fixture
def sigma_x():
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@pytest.fixture
def rho_qubit():
    return np.diag([0.75, 0.25]).astype(complex)


@pytest.fixture
def pure_qubit():
    return np.diag([1.0, 0.0]).astype(complex)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance_log():
    """Collects criterion lines for the end-of-run summary."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
