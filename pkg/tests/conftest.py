import pytest

from dhlab.primes import sieve_range
from dhlab.problem import ProblemSpec


@pytest.fixture(scope="session")
def table():
    return sieve_range(0, 20000)


@pytest.fixture(scope="session")
def toy():
    # p1 = p2^2 + p3^2 + p4^2, e.g. 83 = 9 + 25 + 49
    return ProblemSpec.build((1, -1, -1, -1), 0, 100, 0.04, overrides={"eta": 0.5})
