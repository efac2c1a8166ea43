import json

import numpy as np
import pytest
from pydantic import ValidationError

from quantum_opinion.config import (
    RunConfig,
    build_quantum_game,
    load_config,
    merge_overrides,
    preset_state,
    resolve_state,
    resolve_strategies,
)
from quantum_opinion.errors import ConfigError, DimensionMismatchError, NormalizationError
from quantum_opinion.mw_engine import MixedStrategy2, MixedStrategy3


def test_defaults():
    config = RunConfig()
    assert config.model == "GM1"
    assert config.dim == 2
    assert resolve_state(config).basis_label() == (1, 1)


def test_presets():
    assert preset_state("basis-23", 3).basis_label() == (2, 3)
    entangled = preset_state("entangled-11-33", 3)
    np.testing.assert_allclose(np.diag(entangled.probabilities), [0.5, 0.0, 0.5], atol=1e-15)
    assert preset_state("uniform", 2).probabilities == pytest.approx(np.full((2, 2), 0.25))
    assert preset_state("not-a-preset", 2) is None


def test_preset_label_out_of_range():
    with pytest.raises(DimensionMismatchError):
        preset_state("basis-33", 2)


def test_amplitude_list_state():
    config = RunConfig(state=[[0.6, 0.0], [0.0, 0.8], [0.0, 0.0], [0.0, 0.0]])
    state = resolve_state(config)
    assert state.probabilities[0, 0] == pytest.approx(0.36)
    assert state.probabilities[0, 1] == pytest.approx(0.64)


def test_unnormalized_amplitudes_need_flag():
    amplitudes = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    with pytest.raises(NormalizationError):
        resolve_state(RunConfig(state=amplitudes))
    state = resolve_state(RunConfig(state=amplitudes, normalize=True))
    assert state.probabilities[1, 1] == pytest.approx(0.5)


def test_wrong_amplitude_count():
    with pytest.raises(DimensionMismatchError):
        resolve_state(RunConfig(model="GM2", state=[[1.0, 0.0]] + [[0.0, 0.0]] * 3))


def test_state_file(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"amplitudes": [[0.0, 1.0]] + [[0.0, 0.0]] * 8}))
    state = resolve_state(RunConfig(model="GM3", state=str(path)))
    assert state.basis_label() == (1, 1)
    assert state.amplitude(1, 1) == 1j


def test_unknown_state():
    with pytest.raises(ConfigError):
        resolve_state(RunConfig(state="does-not-exist"))


def test_load_config_and_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "model": "GM3",
        "params": {"a": 2.0, "d": 0.5},
        "state": "entangled-11-33",
        "strategies": {"pa": 0.0, "pa1": 1.0, "qb": 0.0, "qb1": 1.0},
    }))
    config = merge_overrides(load_config(path), {"d": 2.0, "seed": 7, "model": None})
    assert config.model == "GM3"
    assert config.params.a == 2.0
    assert config.params.d == 2.0
    assert config.seed == 7
    s_a, s_b = resolve_strategies(config)
    assert s_a == MixedStrategy3(p=0.0, p1=1.0)
    assert build_quantum_game(config).dim == 3


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(listed)


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        merge_overrides({"modle": "GM1"}, {})
    with pytest.raises(ValidationError):
        merge_overrides({}, {"model": "GM4"})


def test_strategies_required():
    with pytest.raises(ConfigError):
        resolve_strategies(RunConfig())


def test_gm1_strategies():
    config = merge_overrides({}, {"pa": 0.25, "qb": 1.0})
    assert resolve_strategies(config) == (MixedStrategy2(p=0.25), MixedStrategy2(p=1.0))
    with pytest.raises(DimensionMismatchError):
        resolve_strategies(merge_overrides({}, {"pa": 0.25, "qb": 1.0, "pa1": 0.5}))


def test_strategy_outside_simplex():
    config = merge_overrides({}, {"model": "GM2", "pa": 0.8, "pa1": 0.5, "qb": 0.0})
    with pytest.raises(ValidationError):
        resolve_strategies(config)


def test_unreadable_config_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path)
    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff\xfe{}")
    with pytest.raises(ConfigError):
        load_config(binary)


@pytest.mark.parametrize("content", [
    json.dumps([["x", 0]] + [[0.0, 0.0]] * 3),
    json.dumps([[1.0, 0.0, 0.0]] + [[0.0, 0.0]] * 3),
    json.dumps({"amplitudes": "basis-11"}),
])
def test_bad_state_file_contents(tmp_path, content):
    path = tmp_path / "state.json"
    path.write_text(content)
    with pytest.raises(ConfigError):
        resolve_state(RunConfig(state=str(path)))


def test_binary_state_file(tmp_path):
    path = tmp_path / "state.json"
    path.write_bytes(b"\xff\xfe\x00")
    with pytest.raises(ConfigError):
        resolve_state(RunConfig(state=str(path)))


def test_grid_resolution_bounds():
    assert merge_overrides({}, {"grid": 20}).grid == 20
    with pytest.raises(ValidationError):
        merge_overrides({}, {"grid": 21})
    with pytest.raises(ValidationError):
        merge_overrides({}, {"grid": 0})
