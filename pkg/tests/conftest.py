import numpy as np
import pytest

from labelfree import ModeBasis


@pytest.fixture
def lcr():
    return ModeBasis(("L", "C", "R"))


@pytest.fixture
def lr():
    return ModeBasis(("L", "R"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
