import numpy as np
import pytest

from b2p1.bathymetry import Bathymetry
from b2p1.grid import Grid1D, Grid2D
from b2p1.params import SmallParams


@pytest.fixture
def grid():
    return Grid2D(32, 32, 2 * np.pi, 2 * np.pi)


@pytest.fixture
def rect_grid():
    return Grid2D(48, 32, 12.0, 8.0)


@pytest.fixture
def grid1d():
    return Grid1D(64, 2 * np.pi)


@pytest.fixture
def p01():
    return SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.1)


@pytest.fixture
def tent():
    return Bathymetry.tent(0.5)


@pytest.fixture
def trig_bath():
    return Bathymetry.trig(((1, 0, 0.3, 0.0), (0, 1, 0.0, 0.2)), h0=0.5)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
