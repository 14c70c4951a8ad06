import numpy as np
import pytest

from krallpoly.checks import ball_functional, sample_ball
from krallpoly.mop import build_basis


@pytest.fixture(scope="session")
def disk():
    """Normalized uniform disk functional, exact through degree 20."""
    return ball_functional(2, 0.5, 8)


@pytest.fixture(scope="session")
def disk_basis(disk):
    return build_basis(disk, 8)


@pytest.fixture(scope="session")
def ball3():
    return ball_functional(3, 1.0, 6)


@pytest.fixture(scope="session")
def ball3_basis(ball3):
    return build_basis(ball3, 6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def disk_points(rng):
    return sample_ball(rng, 40, 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
