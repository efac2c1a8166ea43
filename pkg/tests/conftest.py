import numpy as np
import pytest
from hypothesis import strategies as st

from quantum_opinion.mw_engine import QuantumGame
from quantum_opinion.opinion_games import GameParams, build_gm1, build_gm3
from quantum_opinion.tensor_core import basis_state, superposition_state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def params():
    return GameParams(a=1.0, b=1.0, c=1.0, d=2.0)


@pytest.fixture
def gm1_basis_game(params):
    return QuantumGame(build_gm1(params), basis_state(1, 1, 2))


@pytest.fixture
def gm3_entangled_game(params):
    return QuantumGame(build_gm3(params), superposition_state([(1, 1), (3, 3)], 3))


positive = st.floats(min_value=0.1, max_value=10.0, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def game_params(draw):
    return GameParams(a=draw(positive), b=draw(positive), c=draw(positive), d=draw(positive))
