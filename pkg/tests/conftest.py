import math

import pytest

from harmapprox.boundary import canonical_fixture_boundary, preset
from harmapprox.geometry import Segment

OMEGAS = (math.pi / 6, math.pi / 3, 1.4)

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(params=OMEGAS, ids=lambda w: f"w={w:.4f}")
def segment(request):
    return Segment(request.param)


@pytest.fixture
def flat_step():
    seg = Segment(math.pi / 3)
    phi, K = preset("flat-step", seg)
    return canonical_fixture_boundary(seg, phi), K
