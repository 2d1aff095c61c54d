import numpy as np
import pytest

from fusionkit import FusionSystem, f_dual

SQ2 = np.sqrt(2.0)

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def lines(*vectors):
    return FusionSystem.from_spanning_sets([np.asarray(v, dtype=complex) for v in vectors])


@pytest.fixture
def coord_lines_2():
    return lines([1, 0], [0, 1])


@pytest.fixture
def sys_b():
    """span{e1}, span{(e1 + e2)/sqrt 2} in C^2."""
    return lines([1, 0], [1 / SQ2, 1 / SQ2])


@pytest.fixture
def sys_b_dual(sys_b):
    return f_dual(sys_b)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
