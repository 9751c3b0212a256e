import itertools

import pytest

from dupcodes.core import ChannelParams

# the small parameter grid used by the brute-force checks
SMALL_GRID = [ChannelParams(q, ell, r) for q, ell, r in itertools.product((2, 3), (1, 2), (1, 2))]


def w(text):
    """Word literal from a digit string."""
    return tuple(int(c) for c in text)


@pytest.fixture
def binary111():
    return ChannelParams(2, 1, 1)


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
