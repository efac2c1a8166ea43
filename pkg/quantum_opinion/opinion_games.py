"""
Classical opinion-formation games GM I, GM II and GM III.

Strategies are labelled Change=1, Keep=2, Agree=3. GM I uses only the first
two. Comparisons on classical tables are exact: entries are plain arithmetic on
the inputs, so no tolerance is applied.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from itertools import product
from typing import Annotated, List, NamedTuple, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from quantum_opinion.errors import UnsupportedModelError

logger = logging.getLogger(__name__)

PositiveFinite = Annotated[float, Field(gt=0, allow_inf_nan=False)]

MODELS = ("GM1", "GM2", "GM3")


class Strategy(IntEnum):
    CHANGE = 1
    KEEP = 2
    AGREE = 3

    @property
    def label(self) -> str:
        return self.name.capitalize()


class GameParams(BaseModel):
    """Payoff units a, b, c and opinion distance d, all strictly positive."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: PositiveFinite = 1.0
    b: PositiveFinite = 1.0
    c: PositiveFinite = 1.0
    d: PositiveFinite = 1.0


@dataclass(frozen=True, eq=False)
class BimatrixGame:
    name: str
    payoff_a: np.ndarray
    payoff_b: np.ndarray

    def __post_init__(self):
        for table in (self.payoff_a, self.payoff_b):
            table.setflags(write=False)

    @property
    def n_strategies(self) -> int:
        return self.payoff_a.shape[0]

    @property
    def strategies(self) -> Tuple[Strategy, ...]:
        return tuple(Strategy(k) for k in range(1, self.n_strategies + 1))

    @property
    def strategy_names(self) -> Tuple[str, ...]:
        return tuple(s.label for s in self.strategies)


class PureProfile(NamedTuple):
    row: Strategy
    col: Strategy

    @property
    def label(self) -> str:
        return f"({self.row.label}, {self.col.label})"


def _table(entries) -> np.ndarray:
    return np.array(entries, dtype=float)


def build_gm1(params: GameParams) -> BimatrixGame:
    """2x2 zero-sum game over (Change, Keep); c and d are not read."""
    a, b = params.a, params.b
    payoff_a = _table([
        [0.0, -a - b],
        [a + b, 0.0],
    ])
    return BimatrixGame("GM1", payoff_a, -payoff_a)


def build_gm2(params: GameParams) -> BimatrixGame:
    """3x3 zero-sum game over (Change, Keep, Agree); d is not read."""
    a, b, c = params.a, params.b, params.c
    payoff_a = _table([
        [0.0, -a - b, -a + c],
        [a + b, 0.0, b + c],
        [a - c, -b - c, 0.0],
    ])
    return BimatrixGame("GM2", payoff_a, -payoff_a)


def build_gm3(params: GameParams) -> BimatrixGame:
    """GM II with a 1/d bonus to both players whenever Agree meets a non-Agree strategy, and 2/d each at (Agree, Agree)."""
    a, b, c, d = params.a, params.b, params.c, params.d
    payoff_a = _table([
        [0.0, -a - b, -a + c + 1 / d],
        [a + b, 0.0, b + c + 1 / d],
        [a - c + 1 / d, -b - c + 1 / d, 2 / d],
    ])
    payoff_b = _table([
        [0.0, a + b, a - c + 1 / d],
        [-a - b, 0.0, -b - c + 1 / d],
        [-a + c + 1 / d, b + c + 1 / d, 2 / d],
    ])
    return BimatrixGame("GM3", payoff_a, payoff_b)


_BUILDERS = {"GM1": build_gm1, "GM2": build_gm2, "GM3": build_gm3}

_IGNORED_PARAMS = {"GM1": ("c", "d"), "GM2": ("d",), "GM3": ()}


def build_game(model: str, params: GameParams) -> BimatrixGame:
    try:
        builder = _BUILDERS[model]
    except KeyError:
        raise UnsupportedModelError(f"unknown model {model!r}, expected one of {MODELS}") from None
    return builder(params)


def ignored_params(model: str) -> Tuple[str, ...]:
    """Parameters the given model does not read."""
    if model not in _IGNORED_PARAMS:
        raise UnsupportedModelError(f"unknown model {model!r}, expected one of {MODELS}")
    return _IGNORED_PARAMS[model]


def threshold_distance(params: GameParams) -> float:
    """d = 1/(b+c), where GM III switches between (Agree, Agree) and (Keep, Keep)."""
    return 1.0 / (params.b + params.c)


def profiles(game: BimatrixGame) -> List[PureProfile]:
    return [PureProfile(r, c) for r, c in product(game.strategies, repeat=2)]


def profile_payoffs(game: BimatrixGame, profile: PureProfile) -> Tuple[float, float]:
    r, c = profile.row - 1, profile.col - 1
    return float(game.payoff_a[r, c]), float(game.payoff_b[r, c])


def joint_payoff(game: BimatrixGame, profile: PureProfile) -> float:
    return sum(profile_payoffs(game, profile))


def pure_nash_equilibria(game: BimatrixGame) -> List[PureProfile]:
    """Profiles where no unilateral pure deviation is strictly better (ties count)."""
    equilibria = []
    for profile in profiles(game):
        r, c = profile.row - 1, profile.col - 1
        row_best = game.payoff_a[r, c] >= game.payoff_a[:, c].max()
        col_best = game.payoff_b[r, c] >= game.payoff_b[r, :].max()
        if row_best and col_best:
            equilibria.append(profile)
    logger.debug("%s pure equilibria: %s", game.name, [p.label for p in equilibria])
    return equilibria


def is_zero_sum(game: BimatrixGame) -> bool:
    return bool(np.all(game.payoff_a + game.payoff_b == 0))


def pareto_optimal_pure(game: BimatrixGame) -> List[PureProfile]:
    """Profiles not dominated by another pure profile (weakly better for both, strictly for one)."""
    candidates = profiles(game)
    optimal = []
    for profile in candidates:
        own_a, own_b = profile_payoffs(game, profile)
        dominated = False
        for other in candidates:
            other_a, other_b = profile_payoffs(game, other)
            if other_a >= own_a and other_b >= own_b and (other_a > own_a or other_b > own_b):
                dominated = True
                break
        if not dominated:
            optimal.append(profile)
    return optimal


def payoff_frame(game: BimatrixGame, digits: int = 6) -> pd.DataFrame:
    """Payoff table with "(E_A, E_B)" cells, rows for A and columns for B."""
    cells = [
        [f"({game.payoff_a[r, c]:.{digits}g}, {game.payoff_b[r, c]:.{digits}g})" for c in range(game.n_strategies)]
        for r in range(game.n_strategies)
    ]
    return pd.DataFrame(cells, index=list(game.strategy_names), columns=list(game.strategy_names))
