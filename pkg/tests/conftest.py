import math

import numpy as np
import pytest

from probdel.machine import (
    BlankState, MachineParams, QubitState, random_blank_state,
    random_machine_params, random_qubit_state,
)

SEED = 20240521

# Number of random draws for the property tests
DRAWS = 1000

SQRT_HALF = 1 / math.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def random_draws(rng):
    return [
        (random_qubit_state(rng), random_machine_params(rng), random_blank_state(rng))
        for _ in range(DRAWS)
    ]


@pytest.fixture
def plus_state():
    return QubitState.plus()


@pytest.fixture
def plus_blank():
    return BlankState.plus()


@pytest.fixture
def tilted_state():
    return QubitState(math.sqrt(3) / 2, 0.5)


@pytest.fixture
def half_machine():
    return MachineParams(SQRT_HALF, SQRT_HALF)
