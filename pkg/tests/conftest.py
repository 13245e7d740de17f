from fractions import Fraction

import pytest

from insdel.highrate import build_highrate
from insdel.regimes import build_highnoise

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_highrate():
    """q = 16, h = 1: 256 inner words of length 24, found in well under a second."""
    return build_highrate(q=16, h=1, delta=Fraction(1, 10), m=24, d=4)


@pytest.fixture(scope="session")
def desk_highrate():
    """q = n = 64, h = 1, delta = 1/10, m = 48: 4096 inner words."""
    return build_highrate(q=64, h=1, delta=Fraction(1, 10), m=48, d=14)


@pytest.fixture(scope="session")
def desk_concat():
    """q = n = 64, degree bound 2, inner [2048]^10 with pairwise LCS <= 1."""
    return build_highnoise(Fraction(4, 5), 64, "explicit", k=2048, m=10, d=2, gamma=Fraction(3, 5))

