"""Shared fixtures for the Max3Sat suite tests."""

import numpy as np
import pytest

from max3sat_suite.core.data_structures import Clause, GeneratorConfig, Literal, Max3SatInstance
from max3sat_suite.core.instance import generate_uniform, make_rng, parse_dimacs

# (x1 v -x2 v x3)(-x2 v x3 v x5)(-x4 v x5 v -x6)
E1_TEXT = "p cnf 6 3\n1 -2 3 0\n-2 3 5 0\n-4 5 -6 0\n"

# x1 forced: x1 = 0 leaves one of the four (x2, x3) clauses unsatisfied
FORCED_X1_TEXT = "p cnf 3 4\n1 2 3 0\n1 -2 3 0\n1 2 -3 0\n1 -2 -3 0\n"


def bits(text: str) -> np.ndarray:
    """'110101' -> array([1, 1, 0, 1, 0, 1]); variable 1 first."""
    return np.array([int(c) for c in text], dtype=np.uint8)


def random_instance(rng: np.random.Generator, n_low: int = 5, n_high: int = 60,
                    ratio: float = 4.27) -> Max3SatInstance:
    """Uniform instance with a random size drawn from rng."""
    n = int(rng.integers(n_low, n_high + 1))
    config = GeneratorConfig(kind="uniform", n=n, cr=ratio, seed=int(rng.integers(2 ** 32)))
    return generate_uniform(config)


def instance_from_lists(n: int, clauses) -> Max3SatInstance:
    return Max3SatInstance(n, [Clause(tuple(Literal.from_dimacs(v) for v in c)) for c in clauses])


@pytest.fixture
def e1():
    return parse_dimacs(E1_TEXT, name="E1")


@pytest.fixture
def forced_x1():
    return parse_dimacs(FORCED_X1_TEXT, name="forced_x1")


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def instance_factory():
    return random_instance
