import math

import pytest

from zmcrot.profiles import Explicit, make_profile
from zmcrot.surface_geom import SurfaceFamily


def surf(kind, b, family, domain=None):
    """Surface from a family descriptor or an explicit curve name."""
    if isinstance(family, str):
        family = Explicit(family)
    return SurfaceFamily(kind, b, make_profile(family, domain))


@pytest.fixture
def m1_circle():
    return surf("M1", 1.0, "sin-cos")


@pytest.fixture
def m1_circle_b2():
    # the unit circle is ZMC only for b = 1; with b = 2 it is the standard negative control
    return surf("M1", 2.0, "sin-cos", (-math.pi / 4, math.pi / 4))


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
