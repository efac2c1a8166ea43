"""
Nash equilibria of quantized games and the GM III joint-payoff maximum.

Expected payoffs are affine in each player's own operator weights, so a
player's best deviation is always one of the pure-operator vertices. Every
equilibrium check here compares a profile against those vertices only; the
dense-grid scan in grid_deviation_gap is kept as an oracle for that reduction.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, islice, product
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from quantum_opinion.errors import NonBasisStateError, NotAnEquilibriumError, StrategyError
from quantum_opinion.mw_engine import (
    MixedStrategy,
    MixedStrategy3,
    QuantumGame,
    action_distribution,
    classical_expected_payoffs,
    expected_payoffs,
    gm3_joint_coefficients,
    gm3_joint_payoff_closed_form,
    operator_names,
    operator_pair_payoffs,
    strategy_grid,
    vertex_strategy,
    weight_vector,
)
from quantum_opinion.opinion_games import GameParams
from quantum_opinion.tensor_core import TOLERANCE, StateVector, basis_state

logger = logging.getLogger(__name__)

EQUILIBRIUM_TOLERANCE = 1e-9
JOINT_GRID_RESOLUTION = 10
# the state grid has C(resolution + 8, 8) rows
MAX_JOINT_GRID_RESOLUTION = 20
DEVIATION_GRID_RESOLUTION = 50

# coefficient of coordinate = payoff(first operator) - payoff(second operator)
COORDINATE_OPERATORS: Dict[int, Dict[str, Tuple[str, str]]] = {
    2: {"p": ("I", "C")},
    3: {"p": ("C", "I"), "p1": ("D", "I")},
}


@dataclass(frozen=True)
class ProfileVerdict:
    strategy_a: MixedStrategy
    strategy_b: MixedStrategy
    payoffs: Tuple[float, float]
    is_equilibrium: bool
    deviation_gap_a: float
    deviation_gap_b: float
    label: Optional[str] = None  # "D,D" style operator names for vertex profiles

    @property
    def joint_payoff(self) -> float:
        return self.payoffs[0] + self.payoffs[1]


class CoordinateStatus(str, Enum):
    FREE = "free"
    UPPER = "pinned-upper"
    LOWER = "pinned-lower"


@dataclass(frozen=True)
class CoordinateReport:
    name: str
    coefficient: float
    status: CoordinateStatus
    interval: Tuple[float, float]  # implied by the coefficient sign, before the simplex cut


@dataclass(frozen=True)
class PlayerFamily:
    player: str
    coordinates: Tuple[CoordinateReport, ...]
    best_response_face: Tuple[str, ...]
    feasible_intervals: Dict[str, Tuple[float, float]]  # the face's coordinate ranges, simplex applied


@dataclass(frozen=True)
class EquilibriumFamily:
    verdict: ProfileVerdict
    players: Tuple[PlayerFamily, PlayerFamily]
    kind: str  # 'product' or 'unclassified'


@dataclass(frozen=True)
class JointMaxResult:
    max_value: float
    arg_state: StateVector
    arg_strategies: Tuple[MixedStrategy3, MixedStrategy3]
    method: str  # 'analytic' or 'grid'
    resolution: Optional[int] = None


def _vertex_payoffs(game: QuantumGame, player: str, s_a: MixedStrategy, s_b: MixedStrategy) -> Dict[str, float]:
    """Payoff of `player` at each of its pure-operator vertices, the opponent held fixed."""
    payoffs = {}
    for name in operator_names(game.dim):
        vertex = vertex_strategy(game.dim, name)
        if player == "A":
            payoffs[name] = expected_payoffs(game, vertex, s_b)[0]
        else:
            payoffs[name] = expected_payoffs(game, s_a, vertex)[1]
    return payoffs


def verify_profile(
    game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy, label: Optional[str] = None
) -> ProfileVerdict:
    """Exact deviation gaps from vertex comparison; equilibrium within 1e-9."""
    payoffs = expected_payoffs(game, s_a, s_b)
    best_a = max(_vertex_payoffs(game, "A", s_a, s_b).values())
    best_b = max(_vertex_payoffs(game, "B", s_a, s_b).values())
    gap_a = max(0.0, best_a - payoffs[0])
    gap_b = max(0.0, best_b - payoffs[1])
    verdict = ProfileVerdict(
        strategy_a=s_a,
        strategy_b=s_b,
        payoffs=payoffs,
        is_equilibrium=max(gap_a, gap_b) <= EQUILIBRIUM_TOLERANCE,
        deviation_gap_a=gap_a,
        deviation_gap_b=gap_b,
        label=label,
    )
    logger.debug("profile %s: payoffs=%s gaps=(%.3g, %.3g)", label or "mixed", payoffs, gap_a, gap_b)
    return verdict


def vertex_profiles(dim: int) -> List[Tuple[str, MixedStrategy, MixedStrategy]]:
    """Every pure-operator profile, in lexicographic order of operator names."""
    names = sorted(operator_names(dim))
    return [
        (f"{name_a},{name_b}", vertex_strategy(dim, name_a), vertex_strategy(dim, name_b))
        for name_a, name_b in product(names, repeat=2)
    ]


def find_vertex_equilibria(game: QuantumGame) -> List[ProfileVerdict]:
    """All pure-operator equilibria; mixed equilibria off the vertices are not searched."""
    equilibria = []
    for label, s_a, s_b in vertex_profiles(game.dim):
        verdict = verify_profile(game, s_a, s_b, label=label)
        if verdict.is_equilibrium:
            equilibria.append(verdict)
    logger.debug("%s: %d vertex equilibria", game.classical.name, len(equilibria))
    return equilibria


def _face(payoffs: Dict[str, float]) -> Tuple[str, ...]:
    best = max(payoffs.values())
    return tuple(name for name, value in payoffs.items() if value >= best - EQUILIBRIUM_TOLERANCE)


def _player_family(dim: int, player: str, payoffs: Dict[str, float]) -> PlayerFamily:
    reports = []
    for coordinate, (plus, minus) in COORDINATE_OPERATORS[dim].items():
        coefficient = payoffs[plus] - payoffs[minus]
        if abs(coefficient) <= EQUILIBRIUM_TOLERANCE:
            status, interval = CoordinateStatus.FREE, (0.0, 1.0)
        elif coefficient > 0:
            status, interval = CoordinateStatus.UPPER, (1.0, 1.0)
        else:
            status, interval = CoordinateStatus.LOWER, (0.0, 0.0)
        reports.append(CoordinateReport(coordinate, coefficient, status, interval))

    face = _face(payoffs)
    feasible = {}
    for coordinate in COORDINATE_OPERATORS[dim]:
        values = [vertex_strategy(dim, name).coordinates[coordinate] for name in face]
        feasible[coordinate] = (min(values), max(values))
    return PlayerFamily(player, tuple(reports), face, feasible)


def _axis_aligned(face: Tuple[str, ...]) -> bool:
    # the C-D edge is the only face of the 3-operator simplex that is not a box cut by p + p1 <= 1
    return set(face) != {"C", "D"}


def _face_is_stable(game: QuantumGame, player: str, face: Tuple[str, ...], opponent_face: Tuple[str, ...]) -> bool:
    """True if `face` stays inside player's best responses for every vertex of the opponent's face."""
    for name in opponent_face:
        vertex = vertex_strategy(game.dim, name)
        if player == "A":
            payoffs = _vertex_payoffs(game, "A", vertex_strategy(game.dim, face[0]), vertex)
        else:
            payoffs = _vertex_payoffs(game, "B", vertex, vertex_strategy(game.dim, face[0]))
        if not set(face) <= set(_face(payoffs)):
            return False
    return True


def equilibrium_family(game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy) -> EquilibriumFamily:
    """
    Describe the equilibrium set around a verified profile.

    Each coordinate is free when the player's payoff does not depend on it
    and pinned to a simplex boundary otherwise. The family is the product of
    both players' best-response faces. It is reported as 'product' when
    both faces are axis-aligned and each stays a best response against every
    vertex of the other; anything else is 'unclassified' and only the sample
    profile is vouched for.
    """
    verdict = verify_profile(game, s_a, s_b)
    if not verdict.is_equilibrium:
        raise NotAnEquilibriumError(
            f"deviation gaps ({verdict.deviation_gap_a:.3g}, {verdict.deviation_gap_b:.3g}) exceed {EQUILIBRIUM_TOLERANCE}"
        )
    family_a = _player_family(game.dim, "A", _vertex_payoffs(game, "A", s_a, s_b))
    family_b = _player_family(game.dim, "B", _vertex_payoffs(game, "B", s_a, s_b))

    aligned = _axis_aligned(family_a.best_response_face) and _axis_aligned(family_b.best_response_face)
    stable = _face_is_stable(game, "A", family_a.best_response_face, family_b.best_response_face) and _face_is_stable(
        game, "B", family_b.best_response_face, family_a.best_response_face
    )
    kind = "product" if aligned and stable else "unclassified"
    return EquilibriumFamily(verdict, (family_a, family_b), kind)


@lru_cache(maxsize=None)
def _grid_weights(dim: int, points: int) -> np.ndarray:
    weights = np.array([weight_vector(s) for s in strategy_grid(dim, points)])
    weights.setflags(write=False)
    return weights


def grid_deviation_gap(
    game: QuantumGame, s_a: MixedStrategy, s_b: MixedStrategy, player: str, resolution: int = DEVIATION_GRID_RESOLUTION
) -> float:
    """Best gain `player` finds by scanning its strategy space on a 1/resolution grid."""
    table_a, table_b = operator_pair_payoffs(game)
    grid = _grid_weights(game.dim, resolution + 1)
    payoff_a, payoff_b = expected_payoffs(game, s_a, s_b)
    if player == "A":
        best = float(np.max(grid @ table_a @ weight_vector(s_b)))
        return max(0.0, best - payoff_a)
    if player == "B":
        best = float(np.max(weight_vector(s_a) @ table_b @ grid.T))
        return max(0.0, best - payoff_b)
    raise StrategyError(f"unknown player {player!r}")


def _state_simplex_chunks(resolution: int, chunk: int, parts: int = 9) -> Iterator[np.ndarray]:
    """Weight vectors with entries k/resolution summing to 1, in lexicographic bar order, `chunk` rows at a time."""
    bar_sets = combinations(range(resolution + parts - 1), parts - 1)
    while True:
        rows = list(islice(bar_sets, chunk))
        if not rows:
            return
        bars = np.array(rows, dtype=int)
        edges = np.hstack([
            np.full((bars.shape[0], 1), -1),
            bars,
            np.full((bars.shape[0], 1), resolution + parts - 1),
        ])
        yield (np.diff(edges, axis=1) - 1) / resolution


def _state_from_weights(weights: np.ndarray) -> StateVector:
    return StateVector(3, 3, np.sqrt(weights).astype(np.complex128))


def _maximize_analytic(params: GameParams) -> JointMaxResult:
    best = None
    for i, j in product(range(1, 4), repeat=2):
        state = basis_state(i, j, 3)
        for p, q in product((0.0, 1.0), repeat=2):
            value = gm3_joint_payoff_closed_form(params, state, p, q)
            if best is None or value > best[0]:
                best = (value, state, p, q)
    value, state, p, q = best
    return JointMaxResult(
        max_value=value,
        arg_state=state,
        arg_strategies=(MixedStrategy3(p=p, p1=0.0), MixedStrategy3(p=q, p1=0.0)),
        method="analytic",
    )


def _maximize_grid(params: GameParams, resolution: int, chunk: int = 4096) -> JointMaxResult:
    steps = np.arange(resolution + 1) / resolution
    best_value, best_weights, best_steps = -np.inf, None, None
    scanned = 0
    for block in _state_simplex_chunks(resolution, chunk):
        scanned += block.shape[0]
        const, coef_p, coef_q = gm3_joint_coefficients(block.reshape(-1, 3, 3))
        values = (
            const[:, None, None]
            + coef_p[:, None, None] * steps[None, :, None]
            + coef_q[:, None, None] * steps[None, None, :]
        ) / params.d
        flat = int(np.argmax(values))
        if values.flat[flat] > best_value:
            best_value = float(values.flat[flat])
            row, pi, qi = np.unravel_index(flat, values.shape)
            best_weights, best_steps = block[row].copy(), (int(pi), int(qi))
    pi, qi = best_steps
    logger.debug("joint grid: %d states x %d^2 strategies, best %.12g", scanned, resolution + 1, best_value)
    return JointMaxResult(
        max_value=best_value,
        arg_state=_state_from_weights(best_weights),
        arg_strategies=(MixedStrategy3(p=float(steps[pi]), p1=0.0), MixedStrategy3(p=float(steps[qi]), p1=0.0)),
        method="grid",
        resolution=resolution,
    )


def maximize_joint_payoff_gm3(
    params: GameParams, method: str = "analytic", resolution: int = JOINT_GRID_RESOLUTION
) -> JointMaxResult:
    """
    Maximize the quantum GM III joint payoff over |u_ij|^2 and p, q.

    The joint payoff is linear in the nine |u_ij|^2 and affine in p and q, so
    the analytic method only evaluates the closed form at basis states with
    p, q in {0, 1}; its maximum is 4/d. The grid method scans the state simplex
    and the p, q square at 1/resolution as an oracle. p1 and q1 do not enter and
    are reported as 0.
    """
    if method == "analytic":
        return _maximize_analytic(params)
    if method == "grid":
        if not 1 <= resolution <= MAX_JOINT_GRID_RESOLUTION:
            raise StrategyError(f"grid resolution must be between 1 and {MAX_JOINT_GRID_RESOLUTION}, got {resolution}")
        return _maximize_grid(params, resolution)
    raise StrategyError(f"unknown method {method!r}, expected 'analytic' or 'grid'")


def classical_reduction_check(game: QuantumGame, i: int, j: int, points: int = 6) -> bool:
    """
    For the basis state |ij>, quantum payoffs equal classical expected payoffs
    under the induced action distributions on a points x points strategy grid.
    """
    if game.initial_state.basis_label() != (i, j):
        raise NonBasisStateError(f"initial state is not |{i}{j}>")
    grid = strategy_grid(game.dim, points)
    for s_a in grid:
        x = action_distribution(s_a, i)
        for s_b in grid:
            y = action_distribution(s_b, j)
            quantum = expected_payoffs(game, s_a, s_b)
            classical = classical_expected_payoffs(game.classical, x, y)
            if abs(quantum[0] - classical[0]) > TOLERANCE or abs(quantum[1] - classical[1]) > TOLERANCE:
                logger.debug("reduction fails at |%d%d>: %s vs %s", i, j, quantum, classical)
                return False
    return True
