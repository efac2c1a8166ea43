"""
Run configuration: a JSON file with nested sections, overridden flag by flag.

    {
      "model": "GM3",
      "params": {"a": 1, "b": 1, "c": 1, "d": 2},
      "state": "entangled-11-33",
      "strategies": {"pa": 0, "pa1": 1, "qb": 0, "qb1": 1},
      "grid": 10,
      "samples": 1000,
      "seed": 20240601
    }

`state` is a preset name, a path to a JSON file holding an amplitude list, or
the amplitude list itself as [re, im] pairs in row-major (i, j) order.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from quantum_opinion.equilibrium import JOINT_GRID_RESOLUTION, MAX_JOINT_GRID_RESOLUTION
from quantum_opinion.errors import (
    ConfigError,
    DimensionMismatchError,
    NormalizationError,
)
from quantum_opinion.mw_engine import MixedStrategy, MixedStrategy2, MixedStrategy3, QuantumGame
from quantum_opinion.opinion_games import GameParams, build_game
from quantum_opinion.tensor_core import StateVector, basis_state, superposition_state, uniform_state

logger = logging.getLogger(__name__)

AMPLITUDE_TOLERANCE = 1e-9
DEFAULT_SEED = 20240601
DEFAULT_STATE = "basis-11"

_BASIS_PRESET = re.compile(r"^basis-(\d)(\d)$")
_ENTANGLED_PRESET = re.compile(r"^entangled-(\d)(\d)-(\d)(\d)$")

AmplitudePair = Tuple[float, float]
_AMPLITUDE_LIST = TypeAdapter(List[AmplitudePair])


class StrategyInputs(BaseModel):
    """Raw strategy coordinates; pa1 and qb1 only exist for 3x3 games."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pa: Optional[float] = None
    pa1: Optional[float] = None
    qb: Optional[float] = None
    qb1: Optional[float] = None


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["GM1", "GM2", "GM3"] = "GM1"
    params: GameParams = GameParams()
    state: Union[str, List[AmplitudePair]] = DEFAULT_STATE
    strategies: StrategyInputs = StrategyInputs()
    grid: int = Field(default=JOINT_GRID_RESOLUTION, ge=1, le=MAX_JOINT_GRID_RESOLUTION)
    samples: int = Field(default=1000, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    normalize: bool = False

    @property
    def dim(self) -> int:
        return 2 if self.model == "GM1" else 3


def _read_json(path: Path, kind: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"{kind} file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{kind} file {path} is not valid JSON: {e}") from None
    except UnicodeDecodeError as e:
        raise ConfigError(f"{kind} file {path} is not UTF-8 text: {e}") from None
    except OSError as e:
        raise ConfigError(f"cannot read {kind} file {path}: {e.strerror or e}") from None


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON config file into a plain dict (validated later by RunConfig)."""
    path = Path(path)
    data = _read_json(path, "config")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    logger.debug("loaded config %s with keys %s", path, sorted(data))
    return data


def merge_overrides(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> RunConfig:
    """
    Apply flag overrides on top of file values, key by key.

    `overrides` uses the flag names: model, a, b, c, d, state, pa, pa1, qb, qb1,
    grid, samples, seed, normalize. None means the flag was not given.
    """
    data = {key: value for key, value in base.items()}
    data["params"] = dict(data.get("params") or {})
    data["strategies"] = dict(data.get("strategies") or {})
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ("a", "b", "c", "d"):
            data["params"][key] = value
        elif key in ("pa", "pa1", "qb", "qb1"):
            data["strategies"][key] = value
        elif key == "normalize":
            data["normalize"] = bool(value) or bool(data.get("normalize", False))
        else:
            data[key] = value
    return RunConfig.model_validate(data)


def _check_label(label: int, dim: int, preset: str) -> None:
    if not 1 <= label <= dim:
        raise DimensionMismatchError(f"preset {preset!r} uses label {label} outside 1..{dim}")


def preset_state(name: str, dim: int) -> Optional[StateVector]:
    """The named preset, or None when `name` is not a preset."""
    if name == "uniform":
        return uniform_state(dim)
    match = _BASIS_PRESET.match(name)
    if match:
        i, j = int(match.group(1)), int(match.group(2))
        _check_label(i, dim, name)
        _check_label(j, dim, name)
        return basis_state(i, j, dim)
    match = _ENTANGLED_PRESET.match(name)
    if match:
        labels = [int(g) for g in match.groups()]
        for label in labels:
            _check_label(label, dim, name)
        first, second = (labels[0], labels[1]), (labels[2], labels[3])
        if first == second:
            raise ConfigError(f"preset {name!r} repeats the same basis state")
        return superposition_state([first, second], dim)
    return None


def state_from_pairs(pairs: List[AmplitudePair], dim: int, normalize: bool = False) -> StateVector:
    if len(pairs) != dim * dim:
        raise DimensionMismatchError(f"{len(pairs)} amplitudes given, a {dim}x{dim} state needs {dim * dim}")
    values = np.array([complex(re_part, im_part) for re_part, im_part in pairs], dtype=np.complex128)
    norm = float(np.sum(np.abs(values) ** 2))
    if not normalize and abs(norm - 1.0) > AMPLITUDE_TOLERANCE:
        raise NormalizationError(f"amplitudes have squared norm {norm!r}; pass --normalize to rescale")
    # within the input tolerance, rescale so the state meets the 1e-12 invariant
    return StateVector.from_amplitudes(values, dim, normalize=True)


def _pairs_from_file(path: Path) -> List[AmplitudePair]:
    raw = _read_json(path, "state")
    if isinstance(raw, dict):
        raw = raw.get("amplitudes")
    try:
        return _AMPLITUDE_LIST.validate_python(raw)
    except ValidationError as e:
        raise ConfigError(
            f"state file {path} must hold a list of numeric [re, im] pairs ({e.error_count()} bad entries)"
        ) from None


def resolve_state(config: RunConfig) -> StateVector:
    dim = config.dim
    if isinstance(config.state, list):
        return state_from_pairs(config.state, dim, config.normalize)
    state = preset_state(config.state, dim)
    if state is not None:
        return state
    path = Path(config.state)
    if path.is_file():
        logger.debug("reading amplitudes from %s", path)
        return state_from_pairs(_pairs_from_file(path), dim, config.normalize)
    raise ConfigError(
        f"unknown state {config.state!r}: expected basis-ij, entangled-ij-kl, uniform or a path to an amplitude file"
    )


def resolve_strategies(config: RunConfig) -> Tuple[MixedStrategy, MixedStrategy]:
    """Strategy pair for the configured game; raises ConfigError when coordinates are missing."""
    inputs = config.strategies
    if inputs.pa is None or inputs.qb is None:
        raise ConfigError("this command needs strategies: give --pa and --qb (and --pa1/--qb1 for GM2/GM3)")
    if config.dim == 2:
        if inputs.pa1 is not None or inputs.qb1 is not None:
            raise DimensionMismatchError("GM1 strategies have a single coordinate; drop --pa1/--qb1")
        return MixedStrategy2(p=inputs.pa), MixedStrategy2(p=inputs.qb)
    return (
        MixedStrategy3(p=inputs.pa, p1=inputs.pa1 or 0.0),
        MixedStrategy3(p=inputs.qb, p1=inputs.qb1 or 0.0),
    )


def build_quantum_game(config: RunConfig) -> QuantumGame:
    return QuantumGame(build_game(config.model, config.params), resolve_state(config))
