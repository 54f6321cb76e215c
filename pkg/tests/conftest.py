import numpy as np
import pytest

from tveroute.flowfield import GriddedField, JetFlow, UniformFlow

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def jet():
    return JetFlow()


@pytest.fixture
def still():
    return UniformFlow()


def constant_grid(u, v, x=(0.0, 1.0, 2.0), y=(0.0, 1.0), t=(0.0, 5.0)):
    shape = (len(t), len(y), len(x))
    return GriddedField(np.array(x), np.array(y), np.array(t), np.full(shape, u), np.full(shape, v))
