import numpy as np
import pytest

from slicecalc.quaternion import Quaternion

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_quaternions(rng, n, scale=1.0):
    return [Quaternion(*(float(c) for c in row)) for row in rng.normal(size=(n, 4)) * scale]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
