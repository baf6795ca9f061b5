import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fsmcap import fixtures
from fsmcap.pfa import make_pfa

H = Fraction(1, 2)


@pytest.fixture(scope="session")
def example1():
    return fixtures.example1()


@pytest.fixture(scope="session")
def amp3():
    return fixtures.amp3()


@pytest.fixture(scope="session")
def d_34():
    return fixtures.d_34()


@pytest.fixture(scope="session")
def d_25():
    return fixtures.d_25()


@pytest.fixture(scope="session")
def family3():
    return fixtures.family3()


@pytest.fixture(scope="session")
def always_accept():
    return make_pfa(["s"], ["a", "b"], {"a": [[1]], "b": [[1]]}, [1], ["s"])


@pytest.fixture(scope="session")
def never_accept():
    return make_pfa(["s"], ["a", "b"], {"a": [[1]], "b": [[1]]}, [1], [])


@pytest.fixture(scope="session")
def uniform_mixer():
    """Two states, every symbol mixes uniformly: value 1/2 for every
    nonempty word, 0 for the empty one."""
    m = [[H, H], [H, H]]
    return make_pfa(["s1", "s2"], ["a", "b"], {"a": m, "b": m}, [1, 0], ["s2"])
