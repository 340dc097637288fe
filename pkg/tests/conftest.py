import numpy as np
import pytest

from lprf import make_field

# every field of order <= 729 used by the exhaustive checks
SMALL_LADDER = [(3, 2), (5, 2), (3, 3), (7, 2), (11, 2), (5, 3), (7, 3), (3, 6)]


def square_set(F):
    """Brute-force oracle: the set of nonzero squares, as coefficient tuples."""
    return {(b * b).coeffs for b in F.elements(nonzero=True)}


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture(scope="session")
def F9():
    return make_field(3, 2)


@pytest.fixture(scope="session", params=SMALL_LADDER, ids=lambda pr: f"F{pr[0]}^{pr[1]}")
def small_field(request):
    return make_field(*request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
