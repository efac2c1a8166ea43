"""
Marinatto-Weber quantization of the opinion games.

Each player mixes fixed permutation operators: I and C for 2x2 games, I, C and
D for 3x3 games. The final density matrix is the weighted mixture of
(U_A (x) U_B) rho_in (U_A (x) U_B)^dagger over every operator pair, and each
expected payoff is Tr(P_X rho_fin) with a diagonal payoff operator P_X.

Action mapping for basis initial states: starting from label i, operator X
lands on X(i). With |11> and 2x2, weight p on I is the probability of ending
on Change. With |11> and 3x3, (1 - p - p1, p1, p) are the probabilities of
Change, Keep, Agree, because C maps 1 to 3 and D maps 1 to 2.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Annotated, ClassVar, Dict, List, Mapping, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from quantum_opinion.errors import DimensionMismatchError, StrategyError
from quantum_opinion.opinion_games import BimatrixGame, GameParams
from quantum_opinion.tensor_core import (
    TOLERANCE,
    DensityMatrix,
    Operator,
    StateVector,
    conjugate_sandwich,
    expectation,
    outer_product,
    permutation_operator,
    tensor,
)

logger = logging.getLogger(__name__)

Probability = Annotated[float, Field(ge=0.0, le=1.0, allow_inf_nan=False)]

# U|j> = |mapping[j]>, labels 1-based
OPERATOR_MAPS: Dict[int, Dict[str, Dict[int, int]]] = {
    2: {
        "I": {1: 1, 2: 2},
        "C": {1: 2, 2: 1},
    },
    3: {
        "I": {1: 1, 2: 2, 3: 3},
        "C": {1: 3, 2: 2, 3: 1},
        "D": {1: 2, 2: 1, 3: 3},
    },
}


class MixedStrategy2(BaseModel):
    """Weight p on I and 1 - p on C."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    DIM: ClassVar[int] = 2

    p: Probability

    def operator_weights(self) -> Dict[str, float]:
        return {"I": self.p, "C": 1.0 - self.p}

    @property
    def coordinates(self) -> Dict[str, float]:
        return {"p": self.p}


class MixedStrategy3(BaseModel):
    """Weight p on C, p1 on D and 1 - p - p1 on I."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    DIM: ClassVar[int] = 3

    p: Probability
    p1: Probability

    @model_validator(mode="after")
    def _inside_simplex(self) -> "MixedStrategy3":
        if self.p + self.p1 > 1.0 + TOLERANCE:
            raise ValueError(f"strategy outside simplex: p + p1 = {self.p + self.p1!r} > 1")
        return self

    def operator_weights(self) -> Dict[str, float]:
        return {"I": 1.0 - self.p - self.p1, "C": self.p, "D": self.p1}

    @property
    def coordinates(self) -> Dict[str, float]:
        return {"p": self.p, "p1": self.p1}


MixedStrategy = Union[MixedStrategy2, MixedStrategy3]

_VERTICES: Dict[int, Dict[str, MixedStrategy]] = {
    2: {"I": MixedStrategy2(p=1.0), "C": MixedStrategy2(p=0.0)},
    3: {
        "I": MixedStrategy3(p=0.0, p1=0.0),
        "C": MixedStrategy3(p=1.0, p1=0.0),
        "D": MixedStrategy3(p=0.0, p1=1.0),
    },
}


def _check_dim(dim: int) -> None:
    if dim not in OPERATOR_MAPS:
        raise DimensionMismatchError(f"no operator set for dimension {dim}")


def operator_names(dim: int) -> Tuple[str, ...]:
    _check_dim(dim)
    return tuple(OPERATOR_MAPS[dim])


@lru_cache(maxsize=None)
def operator_set(dim: int) -> Dict[str, Operator]:
    """Named permutation operators in fixed order: (I, C) or (I, C, D)."""
    _check_dim(dim)
    return {name: permutation_operator(mapping, dim, name) for name, mapping in OPERATOR_MAPS[dim].items()}


def vertex_strategy(dim: int, name: str) -> MixedStrategy:
    """The strategy that applies operator `name` with certainty."""
    _check_dim(dim)
    try:
        return _VERTICES[dim][name]
    except KeyError:
        raise StrategyError(f"no operator {name!r} for dimension {dim}") from None


def random_strategy(dim: int, rng: np.random.Generator) -> MixedStrategy:
    """Uniform draw from the player's strategy simplex."""
    _check_dim(dim)
    if dim == 2:
        return MixedStrategy2(p=float(rng.uniform()))
    _, p, p1 = rng.dirichlet(np.ones(3))
    return MixedStrategy3(p=float(p), p1=float(p1))


def strategy_grid(dim: int, points: int) -> List[MixedStrategy]:
    """Strategies whose coordinates lie on k/(points-1), restricted to the simplex."""
    _check_dim(dim)
    if points < 2:
        raise StrategyError("a strategy grid needs at least 2 points per coordinate")
    steps = points - 1
    values = [k / steps for k in range(points)]
    if dim == 2:
        return [MixedStrategy2(p=v) for v in values]
    return [MixedStrategy3(p=values[i], p1=values[j]) for i in range(points) for j in range(points - i)]


def strategy_dim(strategy: MixedStrategy) -> int:
    return type(strategy).DIM


@dataclass(frozen=True, eq=False)
class QuantumGame:
    classical: BimatrixGame
    initial_state: StateVector

    def __post_init__(self):
        n = self.classical.n_strategies
        if self.initial_state.dim_a != n or self.initial_state.dim_b != n:
            raise DimensionMismatchError(
                f"{self.classical.name} is {n}x{n} but the initial state is "
                f"{self.initial_state.dim_a}x{self.initial_state.dim_b}"
            )

    @property
    def dim(self) -> int:
        return self.classical.n_strategies

    @property
    def operators(self) -> Dict[str, Operator]:
        return operator_set(self.dim)

    @cached_property
    def rho_in(self) -> DensityMatrix:
        return outer_product(self.initial_state)

    @cached_property
    def conjugated_terms(self) -> Dict[Tuple[str, str], DensityMatrix]:
        """(U_A (x) U_B) rho_in (U_A (x) U_B)^dagger for every operator pair."""
        ops = self.operators
        return {
            (name_a, name_b): conjugate_sandwich(tensor(ops[name_a], ops[name_b]), self.rho_in)
            for name_a in ops
            for name_b in ops
        }

    @cached_property
    def payoff_operators(self) -> Tuple[Operator, Operator]:
        return payoff_operators(self.classical)


def _check_strategies(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> None:
    for who, strategy in (("A", s_a), ("B", s_b)):
        if strategy_dim(strategy) != game.dim:
            raise DimensionMismatchError(
                f"player {who} plays a {strategy_dim(strategy)}-operator strategy in a {game.dim}x{game.dim} game"
            )


def _final_density(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> DensityMatrix:
    _check_strategies(game, s_a, s_b)
    weights_a = s_a.operator_weights()
    weights_b = s_b.operator_weights()
    total = np.zeros((game.dim ** 2, game.dim ** 2), dtype=np.complex128)
    for (name_a, name_b), term in game.conjugated_terms.items():
        total += weights_a[name_a] * weights_b[name_b] * term.matrix
    return DensityMatrix(total)


def final_density_2x2(game: QuantumGame, s_a: MixedStrategy2, s_b: MixedStrategy2) -> DensityMatrix:
    """pq, p(1-q), (1-p)q, (1-p)(1-q) on conjugation by I(x)I, I(x)C, C(x)I, C(x)C."""
    if game.dim != 2:
        raise DimensionMismatchError(f"{game.classical.name} is not a 2x2 game")
    return _final_density(game, s_a, s_b)


def final_density_3x3(game: QuantumGame, s_a: MixedStrategy3, s_b: MixedStrategy3) -> DensityMatrix:
    """Nine-term mixture over {I, C, D} x {I, C, D}."""
    if game.dim != 3:
        raise DimensionMismatchError(f"{game.classical.name} is not a 3x3 game")
    return _final_density(game, s_a, s_b)


def final_density(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> DensityMatrix:
    if game.dim == 2:
        return final_density_2x2(game, s_a, s_b)
    return final_density_3x3(game, s_a, s_b)


def payoff_operators(game: BimatrixGame) -> Tuple[Operator, Operator]:
    """P_X = sum_ij E_X(i, j) |ij><ij|."""
    return (
        Operator(np.diag(game.payoff_a.ravel()), f"P_A[{game.name}]"),
        Operator(np.diag(game.payoff_b.ravel()), f"P_B[{game.name}]"),
    )


def expected_payoffs(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> Tuple[float, float]:
    rho = final_density(game, s_a, s_b)
    p_a, p_b = game.payoff_operators
    return expectation(p_a, rho), expectation(p_b, rho)


def outcome_distribution(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> np.ndarray:
    """Probability of each final pure profile: diagonal of rho_fin as an n x n table."""
    rho = final_density(game, s_a, s_b)
    return rho.diagonal().reshape(game.dim, game.dim)


def operator_pair_payoffs(game: QuantumGame) -> Tuple[np.ndarray, np.ndarray]:
    """Tr(P_X term) for every operator pair, indexed [A operator, B operator] in operator_names order."""
    names = operator_names(game.dim)
    p_a, p_b = game.payoff_operators
    table_a = np.zeros((len(names), len(names)))
    table_b = np.zeros((len(names), len(names)))
    for ia, name_a in enumerate(names):
        for ib, name_b in enumerate(names):
            term = game.conjugated_terms[(name_a, name_b)]
            table_a[ia, ib] = expectation(p_a, term)
            table_b[ia, ib] = expectation(p_b, term)
    return table_a, table_b


def weight_vector(strategy: MixedStrategy) -> np.ndarray:
    weights = strategy.operator_weights()
    return np.array([weights[name] for name in operator_names(strategy_dim(strategy))])


def action_distribution(strategy: MixedStrategy, label: int) -> np.ndarray:
    """Distribution of the final action when starting from basis label `label`."""
    dim = strategy_dim(strategy)
    if not 1 <= label <= dim:
        raise DimensionMismatchError(f"label {label} outside 1..{dim}")
    distribution = np.zeros(dim)
    for name, weight in strategy.operator_weights().items():
        distribution[OPERATOR_MAPS[dim][name][label] - 1] += weight
    return distribution


def classical_expected_payoffs(game: BimatrixGame, x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """x^T E_A y and x^T E_B y for independent action distributions x and y."""
    return float(x @ game.payoff_a @ y), float(x @ game.payoff_b @ y)


def _require_dim(state: StateVector, dim: int) -> np.ndarray:
    if state.dim_a != dim or state.dim_b != dim:
        raise DimensionMismatchError(f"expected a {dim}x{dim} state, got {state.dim_a}x{state.dim_b}")
    return state.probabilities


def gm1_payoff_closed_form(params: GameParams, state: StateVector, p: float, q: float) -> Tuple[float, float]:
    """Closed-form quantum GM I payoffs; only |u_ij|^2 enter."""
    w = _require_dim(state, 2)
    w11, w12, w21, w22 = w[0, 0], w[0, 1], w[1, 0], w[1, 1]
    payoff_a = -(params.a + params.b) * (
        p * w11 + p * w12 - p * w21 - p * w22
        - q * w11 + q * w12 - q * w21 + q * w22
        - w12 + w21
    )
    return float(payoff_a), float(-payoff_a)


def gm3_joint_coefficients(weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Split d * (joint payoff) of quantum GM III into const + p * coef_p + q * coef_q.

    `weights` holds |u_ij|^2 in its last two axes (shape (..., 3, 3)), so a whole
    grid of states can be evaluated at once.
    """
    w = np.asarray(weights, dtype=float)
    w11, w12, w13 = w[..., 0, 0], w[..., 0, 1], w[..., 0, 2]
    w21, w23 = w[..., 1, 0], w[..., 1, 2]
    w31, w32, w33 = w[..., 2, 0], w[..., 2, 1], w[..., 2, 2]
    const = 2 * w13 + 2 * w23 + 2 * w31 + 2 * w32 + 4 * w33
    coef_p = 2 * w11 + 2 * w12 + 2 * w13 - 2 * w31 - 2 * w32 - 2 * w33
    coef_q = 2 * w11 - 2 * w13 + 2 * w21 - 2 * w23 + 2 * w31 - 2 * w33
    return const, coef_p, coef_q


def gm3_joint_payoff_closed_form(params: GameParams, state: StateVector, p: float, q: float) -> float:
    """Closed-form joint payoff of quantum GM III; independent of p1 and q1."""
    const, coef_p, coef_q = gm3_joint_coefficients(_require_dim(state, 3))
    return float((const + p * coef_p + q * coef_q) / params.d)


def gm3_entangled_payoffs_closed_form(
    params: GameParams, s_a: MixedStrategy3, s_b: MixedStrategy3
) -> Tuple[float, float]:
    """Closed-form quantum GM III payoffs for the fixed state sqrt(0.5)(|11> + |33>)."""
    a, b, d = params.a, params.b, params.d
    p1, q1 = s_a.p1, s_b.p1
    payoff_a = (a * d * p1 - a * d * q1 + b * d * p1 - b * d * q1 + 2) / (2 * d)
    payoff_b = (a * d * q1 - a * d * p1 - b * d * p1 + b * d * q1 + 2) / (2 * d)
    return float(payoff_a), float(payoff_b)


def describe_strategy(strategy: MixedStrategy) -> Mapping[str, float]:
    """Coordinates plus the implied operator weights, for reports."""
    described = dict(strategy.coordinates)
    described.update({f"w_{name}": weight for name, weight in strategy.operator_weights().items()})
    return described
