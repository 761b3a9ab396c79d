import numpy as np
import pytest

from advicegame._client import AdviceGame
from tests.faker import random_seed

# one point inside each pure-equilibrium range, plus both breakpoints
range_epsilons = [0.1, 0.4, 0.7]
breakpoint_epsilons = [0.25, 0.5]
table_epsilons = [0.0, 0.2, 0.4, 0.6, 0.75]


@pytest.fixture(scope="session")
def client() -> AdviceGame:
    return AdviceGame(epsilon=0.4)


@pytest.fixture(scope="session")
def family_client() -> AdviceGame:
    return AdviceGame()


@pytest.fixture(scope="session")
def epsilon_grid() -> np.ndarray:
    # 16 values covering the whole family, endpoints included
    return np.linspace(0.0, 0.75, 16)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(random_seed())


@pytest.fixture(scope="session")
def seed() -> int:
    return random_seed()
