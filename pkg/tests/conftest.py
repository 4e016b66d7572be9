import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from symtensor.exactfield import field_make
from symtensor.instances import SeedRecipe, seed, seed_singular_genus4
from symtensor.tensor import BlockTensor

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# the accidentally essential example: a 3x3 symmetroid in P^2
ACCIDENTAL_EXAMPLE = [
    [
        [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
        [[0, 1, 2], [1, 3, 4], [2, 4, 5]],
        [[0, 6, 7], [6, 8, 9], [7, 9, 10]],
    ]
]

# the diagonal Cayley cubic in P^3
CAYLEY_CUBIC = [
    [
        [[1, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 0, 0], [0, 1, 0], [0, 0, 0]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
        [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
    ]
]


@pytest.fixture(scope="session")
def F101():
    return field_make(101)


@pytest.fixture(scope="session")
def accidental_example(F101):
    return BlockTensor.from_ints(F101, ACCIDENTAL_EXAMPLE)


@pytest.fixture(scope="session")
def cayley_cubic(F101):
    return BlockTensor.from_ints(F101, CAYLEY_CUBIC)


@pytest.fixture(scope="session")
def genus3(F101):
    return seed("genus3", F101, 1)


@pytest.fixture(scope="session")
def genus4(F101):
    return seed("genus4", F101, 1)


@pytest.fixture(scope="session")
def genus5():
    return seed("genus5", field_make(41), 1)


@pytest.fixture(scope="session")
def quintic():
    return seed("quintic", field_make(11), 1)


@pytest.fixture(scope="session")
def singular_genus4(F101):
    return seed_singular_genus4(SeedRecipe("genus4", F101, 1))


# -- acceptance summary: one line per criterion-marked test ---------------------------------

_CRITERIA: dict[int, tuple[str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    k = mark.args[0]
    status = "PASS" if rep.passed else "FAIL"
    prev = _CRITERIA.get(k)
    if prev is None or prev[0] == "PASS":
        total = rep.duration + (prev[1] if prev else 0.0)
        _CRITERIA[k] = (status, total)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        status, seconds = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}  ({seconds:.1f} s)")
