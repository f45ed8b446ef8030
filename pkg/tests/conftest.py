import math

import pytest

from lrpulse import BlochAngles, Branch, DesignSpec, DeviceParams, Mode, design, simulate

EX1 = DesignSpec(Mode.TO_TARGET, BlochAngles(0.0, 0.0), math.pi / 3, Branch.PLUS, 1)
EX2 = DesignSpec(Mode.TO_TARGET, BlochAngles(math.pi / 5, math.pi / 6), math.pi / 4, Branch.MINUS, 1)
EX3 = DesignSpec(Mode.FROM_INITIAL, BlochAngles(math.pi / 2, 0.0), math.pi / 6, Branch.PLUS, -1)
EXAMPLES = {"ex1": EX1, "ex2": EX2, "ex3": EX3}


@pytest.fixture(scope="session")
def params():
    return DeviceParams()


@pytest.fixture(scope="session")
def sims(params):
    return {name: simulate(spec, params) for name, spec in EXAMPLES.items()}


@pytest.fixture(scope="session")
def ex1(params):
    return design(EX1, params)


@pytest.fixture(params=sorted(EXAMPLES))
def example_name(request):
    return request.param


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
