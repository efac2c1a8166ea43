import numpy as np
import pytest
from hypothesis import given, settings
from pydantic import ValidationError

from conftest import game_params
from quantum_opinion.errors import UnsupportedModelError
from quantum_opinion.opinion_games import (
    BimatrixGame,
    GameParams,
    PureProfile,
    Strategy,
    build_game,
    build_gm1,
    build_gm2,
    build_gm3,
    ignored_params,
    is_zero_sum,
    joint_payoff,
    pareto_optimal_pure,
    payoff_frame,
    profile_payoffs,
    profiles,
    pure_nash_equilibria,
    threshold_distance,
)

KEEP_KEEP = PureProfile(Strategy.KEEP, Strategy.KEEP)
AGREE_AGREE = PureProfile(Strategy.AGREE, Strategy.AGREE)
KEEP_CHANGE = PureProfile(Strategy.KEEP, Strategy.CHANGE)


def test_gm1_table():
    game = build_gm1(GameParams(a=1, b=2))
    np.testing.assert_array_equal(game.payoff_a, [[0, -3], [3, 0]])
    np.testing.assert_array_equal(game.payoff_b, [[0, 3], [-3, 0]])
    assert profile_payoffs(game, KEEP_CHANGE) == (3.0, -3.0)


def test_gm1_equilibrium_and_zero_sum():
    game = build_gm1(GameParams(a=1, b=1))
    assert is_zero_sum(game)
    assert pure_nash_equilibria(game) == [KEEP_KEEP]


def test_gm3_cooperative_regime():
    game = build_gm3(GameParams(a=1, b=1, c=1, d=0.4))
    equilibria = pure_nash_equilibria(game)
    assert AGREE_AGREE in equilibria
    assert KEEP_KEEP not in equilibria
    assert joint_payoff(game, AGREE_AGREE) == pytest.approx(10.0)


def test_gm3_competitive_regime():
    game = build_gm3(GameParams(a=1, b=1, c=1, d=1))
    assert pure_nash_equilibria(game) == [KEEP_KEEP]
    assert joint_payoff(game, KEEP_KEEP) == 0.0


def test_gm3_threshold_equality_has_both_equilibria():
    params = GameParams(a=1, b=1, c=1, d=0.5)
    assert threshold_distance(params) == 0.5
    equilibria = pure_nash_equilibria(build_gm3(params))
    assert AGREE_AGREE in equilibria and KEEP_KEEP in equilibria


def test_gm3_agree_bonus_cells():
    game = build_gm3(GameParams(a=1, b=1, c=1, d=1))
    assert profile_payoffs(game, PureProfile(Strategy.KEEP, Strategy.AGREE)) == (3.0, -1.0)
    assert profile_payoffs(game, AGREE_AGREE) == (2.0, 2.0)
    assert not is_zero_sum(game)


def test_non_positive_params_rejected():
    with pytest.raises(ValidationError):
        GameParams(a=0)
    with pytest.raises(ValidationError):
        GameParams(d=-1)
    with pytest.raises(ValidationError):
        GameParams(b=float("inf"))


def test_params_are_frozen():
    params = GameParams()
    with pytest.raises(ValidationError):
        params.a = 2.0


def test_build_game_dispatch():
    assert build_game("GM2", GameParams()).n_strategies == 3
    with pytest.raises(UnsupportedModelError):
        build_game("GM4", GameParams())


def test_ignored_params():
    assert ignored_params("GM1") == ("c", "d")
    assert ignored_params("GM2") == ("d",)
    assert ignored_params("GM3") == ()


def test_payoff_frame_labels():
    frame = payoff_frame(build_gm1(GameParams()))
    assert list(frame.index) == ["Change", "Keep"]
    assert frame.loc["Keep", "Change"] == "(2, -2)"


@given(params=game_params())
@settings(deadline=None, max_examples=100)
def test_gm1_gm2_structure(params):
    for game in (build_gm1(params), build_gm2(params)):
        assert is_zero_sum(game)
        assert pure_nash_equilibria(game) == [KEEP_KEEP]


@given(params=game_params())
@settings(deadline=None, max_examples=100)
def test_gm3_agree_agree_is_pareto_optimal(params):
    assert AGREE_AGREE in pareto_optimal_pure(build_gm3(params))


@given(params=game_params())
@settings(deadline=None, max_examples=100)
def test_gm3_threshold_switch(params):
    d_star = threshold_distance(params)
    below = pure_nash_equilibria(build_gm3(params.model_copy(update={"d": d_star - 1e-6})))
    above = pure_nash_equilibria(build_gm3(params.model_copy(update={"d": d_star + 1e-6})))
    assert AGREE_AGREE in below and KEEP_KEEP not in below
    assert KEEP_KEEP in above and AGREE_AGREE not in above


def test_classical_structure_over_parameter_draws(rng):
    for a, b, c, d in rng.uniform(0.1, 10.0, size=(1000, 4)):
        params = GameParams(a=float(a), b=float(b), c=float(c), d=float(d))
        for game in (build_gm1(params), build_gm2(params)):
            assert is_zero_sum(game)
            assert pure_nash_equilibria(game) == [KEEP_KEEP]


def test_zero_sum_game_is_all_pareto_optimal():
    game = build_gm1(GameParams(a=1.5, b=0.5))
    assert pareto_optimal_pure(game) == profiles(game)
    assert len(pareto_optimal_pure(game)) == 4


def test_pareto_matches_dominance_scan(rng):
    for _ in range(50):
        # small integers so ties between profiles are common
        table_a, table_b = rng.integers(-2, 3, size=(2, 3, 3)).astype(float)
        game = BimatrixGame("random", table_a, table_b)
        cells = np.stack([game.payoff_a.ravel(), game.payoff_b.ravel()], axis=1)
        weakly = np.all(cells[:, None, :] >= cells[None, :, :], axis=2)
        strictly = np.any(cells[:, None, :] > cells[None, :, :], axis=2)
        dominated = np.any(weakly & strictly, axis=0)
        expected = [profile for profile, flag in zip(profiles(game), dominated) if not flag]
        assert pareto_optimal_pure(game) == expected
