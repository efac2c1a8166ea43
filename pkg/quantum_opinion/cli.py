"""
Command-line front end.

    python -m quantum_opinion classical --model GM3 --d 0.4
    python -m quantum_opinion payoff --model GM3 --state entangled-11-33 --pa 0 --pa1 1 --qb 0 --qb1 1 --d 2
    python -m quantum_opinion find-ne --model GM1 --state basis-11
    python -m quantum_opinion max-joint --model GM3 --d 1 --grid 5
    python -m quantum_opinion reproduce-paper --seed 7 --json

Tables and JSON go to stdout, logs and the run summary to stderr.
Exit codes: 0 success, 1 claim or numerical-integrity failure, 2 usage or config error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from quantum_opinion import __version__
from quantum_opinion.claims import format_claim_report, run_claims
from quantum_opinion.config import (
    RunConfig,
    build_quantum_game,
    load_config,
    merge_overrides,
    resolve_strategies,
)
from quantum_opinion.equilibrium import (
    EquilibriumFamily,
    ProfileVerdict,
    equilibrium_family,
    find_vertex_equilibria,
    maximize_joint_payoff_gm3,
    verify_profile,
)
from quantum_opinion.errors import NumericalIntegrityError, QuantumOpinionError, UnsupportedModelError
from quantum_opinion.mw_engine import (
    describe_strategy,
    expected_payoffs,
    gm1_payoff_closed_form,
    gm3_entangled_payoffs_closed_form,
    gm3_joint_payoff_closed_form,
    outcome_distribution,
)
from quantum_opinion.opinion_games import (
    MODELS,
    build_game,
    ignored_params,
    is_zero_sum,
    joint_payoff,
    pareto_optimal_pure,
    payoff_frame,
    profile_payoffs,
    pure_nash_equilibria,
    threshold_distance,
)
from quantum_opinion.tensor_core import TOLERANCE, StateVector, superposition_state

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

JSON_DIGITS = 12
TABLE_DIGITS = 6
BANNER = "=" * 60


@dataclass
class CommandResult:
    report: Dict[str, Any]
    text: str
    exit_code: int = EXIT_OK


def _fmt(value: float) -> str:
    return f"{value:.{TABLE_DIGITS}g}"


def _round_floats(obj: Any) -> Any:
    """Round every float to JSON_DIGITS significant digits."""
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{JSON_DIGITS}g}")
    if isinstance(obj, dict):
        return {key: _round_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    return obj


def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(_round_floats(report), indent=2, sort_keys=True, ensure_ascii=False)


def _state_report(state: StateVector) -> Dict[str, Any]:
    label = state.basis_label()
    return {
        "amplitudes": [[value.real, value.imag] for value in state.amplitudes],
        "basis_label": f"|{label[0]}{label[1]}>" if label else None,
        "probabilities": state.probabilities.tolist(),
    }


def _verdict_report(verdict: ProfileVerdict) -> Dict[str, Any]:
    return {
        "label": verdict.label,
        "strategy_a": describe_strategy(verdict.strategy_a),
        "strategy_b": describe_strategy(verdict.strategy_b),
        "payoffs": list(verdict.payoffs),
        "joint_payoff": verdict.joint_payoff,
        "is_equilibrium": verdict.is_equilibrium,
        "deviation_gap_a": verdict.deviation_gap_a,
        "deviation_gap_b": verdict.deviation_gap_b,
    }


def _family_report(family: EquilibriumFamily) -> Dict[str, Any]:
    return {
        "kind": family.kind,
        "players": [
            {
                "player": player.player,
                "best_response_face": list(player.best_response_face),
                "coordinates": [
                    {
                        "name": c.name,
                        "coefficient": c.coefficient,
                        "status": c.status.value,
                        "interval": list(c.interval),
                    }
                    for c in player.coordinates
                ],
                "feasible_intervals": {name: list(bounds) for name, bounds in player.feasible_intervals.items()},
            }
            for player in family.players
        ],
    }


# --- commands ----------------------------------------------------------------


def cmd_classical(config: RunConfig) -> CommandResult:
    game = build_game(config.model, config.params)
    equilibria = pure_nash_equilibria(game)
    pareto = pareto_optimal_pure(game)
    report = {
        "command": "classical",
        "model": config.model,
        "params": config.params.model_dump(),
        "ignored_params": list(ignored_params(config.model)),
        "strategies": list(game.strategy_names),
        "payoff_a": game.payoff_a.tolist(),
        "payoff_b": game.payoff_b.tolist(),
        "zero_sum": is_zero_sum(game),
        "pure_equilibria": [
            {"profile": p.label, "payoffs": list(profile_payoffs(game, p)), "joint_payoff": joint_payoff(game, p)}
            for p in equilibria
        ],
        "pareto_optimal": [p.label for p in pareto],
    }
    if config.model == "GM3":
        report["threshold_distance"] = threshold_distance(config.params)

    lines = [f"{config.model} payoff table (E_A, E_B), rows A, columns B:", payoff_frame(game, TABLE_DIGITS).to_string(), ""]
    lines.append(f"Zero-sum: {'yes' if report['zero_sum'] else 'no'}")
    lines.append("Pure Nash equilibria:")
    for entry in report["pure_equilibria"]:
        lines.append(f"  {entry['profile']}  payoffs ({_fmt(entry['payoffs'][0])}, {_fmt(entry['payoffs'][1])})  joint {_fmt(entry['joint_payoff'])}")
    lines.append(f"Pareto-optimal: {', '.join(report['pareto_optimal'])}")
    if "threshold_distance" in report:
        lines.append(f"Threshold distance 1/(b+c): {_fmt(report['threshold_distance'])}")
    if report["ignored_params"]:
        lines.append(f"Ignored parameters: {', '.join(report['ignored_params'])}")
    return CommandResult(report, "\n".join(lines))


def _matches_entangled_gm3(state: StateVector) -> bool:
    reference = superposition_state([(1, 1), (3, 3)], 3).probabilities
    return bool(np.allclose(state.probabilities, reference, rtol=0.0, atol=TOLERANCE))


def cmd_payoff(config: RunConfig) -> CommandResult:
    game = build_quantum_game(config)
    s_a, s_b = resolve_strategies(config)
    payoff_a, payoff_b = expected_payoffs(game, s_a, s_b)

    closed_form: Optional[Dict[str, float]] = None
    if config.model == "GM1":
        closed_a, closed_b = gm1_payoff_closed_form(config.params, game.initial_state, s_a.p, s_b.p)
        closed_form = {"payoff_a": closed_a, "payoff_b": closed_b, "joint_payoff": closed_a + closed_b}
    elif config.model == "GM3":
        closed_form = {"joint_payoff": gm3_joint_payoff_closed_form(config.params, game.initial_state, s_a.p, s_b.p)}
        if _matches_entangled_gm3(game.initial_state):
            closed_a, closed_b = gm3_entangled_payoffs_closed_form(config.params, s_a, s_b)
            closed_form.update(payoff_a=closed_a, payoff_b=closed_b)

    report = {
        "command": "payoff",
        "model": config.model,
        "params": config.params.model_dump(),
        "state": _state_report(game.initial_state),
        "strategy_a": describe_strategy(s_a),
        "strategy_b": describe_strategy(s_b),
        "payoff_a": payoff_a,
        "payoff_b": payoff_b,
        "joint_payoff": payoff_a + payoff_b,
        "outcome_distribution": outcome_distribution(game, s_a, s_b).tolist(),
        "closed_form": closed_form,
    }

    rows = ["payoff_a", "payoff_b", "joint_payoff"]
    table = pd.DataFrame({"pipeline": [report[row] for row in rows]}, index=rows)
    if closed_form is not None:
        table["closed form"] = [closed_form.get(row, np.nan) for row in rows]
    lines = [f"Quantum {config.model} expected payoffs:", table.to_string(float_format=_fmt, na_rep="-")]
    return CommandResult(report, "\n".join(lines))


def cmd_find_ne(config: RunConfig) -> CommandResult:
    game = build_quantum_game(config)
    entries = []
    for verdict in find_vertex_equilibria(game):
        entry = _verdict_report(verdict)
        entry["family"] = _family_report(equilibrium_family(game, verdict.strategy_a, verdict.strategy_b))
        entries.append(entry)

    report: Dict[str, Any] = {
        "command": "find-ne",
        "model": config.model,
        "params": config.params.model_dump(),
        "state": _state_report(game.initial_state),
        "vertex_equilibria": entries,
    }
    if config.strategies.pa is not None:
        s_a, s_b = resolve_strategies(config)
        verdict = verify_profile(game, s_a, s_b)
        report["profile"] = _verdict_report(verdict)
        if verdict.is_equilibrium:
            report["profile"]["family"] = _family_report(equilibrium_family(game, s_a, s_b))

    lines = [f"Vertex equilibria of quantum {config.model}:"]
    if not entries:
        lines.append("  none")
    for entry in entries:
        lines.append(
            f"  {entry['label']}  payoffs ({_fmt(entry['payoffs'][0])}, {_fmt(entry['payoffs'][1])})  family {entry['family']['kind']}"
        )
        for player in entry["family"]["players"]:
            coords = ", ".join(f"{c['name']} {c['status']}" for c in player["coordinates"])
            lines.append(f"    {player['player']}: face {'/'.join(player['best_response_face'])}; {coords}")
    if "profile" in report:
        profile = report["profile"]
        lines.append(
            f"Given profile: {'equilibrium' if profile['is_equilibrium'] else 'not an equilibrium'}"
            f"  gaps ({_fmt(profile['deviation_gap_a'])}, {_fmt(profile['deviation_gap_b'])})"
        )
    return CommandResult(report, "\n".join(lines))


def cmd_max_joint(config: RunConfig) -> CommandResult:
    if config.model != "GM3":
        raise UnsupportedModelError(f"max-joint applies to GM3 only, got {config.model}")
    analytic = maximize_joint_payoff_gm3(config.params)
    grid = maximize_joint_payoff_gm3(config.params, method="grid", resolution=config.grid)
    report = {
        "command": "max-joint",
        "model": config.model,
        "params": config.params.model_dump(),
        "analytic": {
            "max_value": analytic.max_value,
            "state": _state_report(analytic.arg_state),
            "strategy_a": describe_strategy(analytic.arg_strategies[0]),
            "strategy_b": describe_strategy(analytic.arg_strategies[1]),
        },
        "grid": {
            "resolution": grid.resolution,
            "max_value": grid.max_value,
            "state": _state_report(grid.arg_state),
            "strategy_a": describe_strategy(grid.arg_strategies[0]),
            "strategy_b": describe_strategy(grid.arg_strategies[1]),
        },
        "gap": analytic.max_value - grid.max_value,
    }
    lines = [
        f"Analytic maximum joint payoff: {_fmt(analytic.max_value)} at {report['analytic']['state']['basis_label']}, "
        f"p={_fmt(analytic.arg_strategies[0].p)}, q={_fmt(analytic.arg_strategies[1].p)}",
        f"Grid oracle (1/{grid.resolution}): {_fmt(grid.max_value)}, gap {_fmt(report['gap'])}",
    ]
    return CommandResult(report, "\n".join(lines))


def cmd_reproduce_paper(config: RunConfig) -> CommandResult:
    reports = run_claims(config.seed, config.samples)
    passed = sum(1 for r in reports if r.passed)
    failed = len(reports) - passed
    report = {
        "command": "reproduce-paper",
        "seed": config.seed,
        "samples": config.samples,
        "summary": {"total": len(reports), "passed": passed, "failed": failed},
        "claims": [format_claim_report(r) for r in reports],
    }
    table = pd.DataFrame(
        {
            "status": [r.status for r in reports],
            "observed": [", ".join(_fmt(v) for v in r.observed) for r in reports],
            "expected": [", ".join(_fmt(v) for v in r.expected) for r in reports],
            "tolerance": [_fmt(r.tolerance) for r in reports],
        },
        index=[r.claim_id for r in reports],
    )

    print(f"\n{BANNER}", file=sys.stderr)
    print("📊 CLAIM SUMMARY", file=sys.stderr)
    print(BANNER, file=sys.stderr)
    print(f"   Total claims: {len(reports)}", file=sys.stderr)
    print(f"   ✅ Pass: {passed}", file=sys.stderr)
    print(f"   ❌ Fail: {failed}", file=sys.stderr)
    for r in reports:
        if not r.passed:
            print(f"   ❌ {r.claim_id}: observed {r.observed}, expected {r.expected}", file=sys.stderr)

    return CommandResult(report, table.to_string(), EXIT_OK if failed == 0 else EXIT_FAILURE)


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "classical": cmd_classical,
    "payoff": cmd_payoff,
    "find-ne": cmd_find_ne,
    "max-joint": cmd_max_joint,
    "reproduce-paper": cmd_reproduce_paper,
}

_HELP = {
    "classical": "classical payoff tables, pure equilibria, zero-sum and Pareto analysis",
    "payoff": "quantum expected payoffs for a strategy pair, with closed forms where available",
    "find-ne": "vertex equilibria of the quantum game and their families",
    "max-joint": "maximum quantum GM3 joint payoff, analytic and grid",
    "reproduce-paper": "run every claim check and report pass/fail",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override its values")
    common.add_argument("--model", choices=MODELS)
    for name in ("a", "b", "c", "d"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--state", help="basis-ij, entangled-ij-kl, uniform, or a JSON file of [re, im] pairs")
    for name in ("pa", "pa1", "qb", "qb1"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--grid", type=int, help="grid resolution for max-joint, 1..20 (default 10)")
    common.add_argument("--samples", type=int, help="draws per sampled claim (default 1000)")
    common.add_argument("--seed", type=int)
    common.add_argument("--json", action="store_true", help="print a JSON report instead of tables")
    common.add_argument("--normalize", action="store_true", help="rescale amplitudes instead of rejecting them")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="quantum-opinion", description="Quantum opinion games toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _HELP.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    return parser


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="[%(asctime)s] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config) if args.config else {}
    overrides = {
        name: getattr(args, name)
        for name in ("model", "a", "b", "c", "d", "state", "pa", "pa1", "qb", "qb1", "grid", "samples", "seed")
    }
    overrides["normalize"] = True if args.normalize else None
    return merge_overrides(base, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(args.verbose)

    try:
        config = config_from_args(args)
        logger.debug("running %s with %s", args.command, config.model_dump())
        result = COMMANDS[args.command](config)
    except NumericalIntegrityError as e:
        logger.error(f"❌ Numerical integrity failure: {e}")
        return EXIT_FAILURE
    except ValidationError as e:
        logger.error(f"❌ Invalid input: {e}")
        return EXIT_USAGE
    except QuantumOpinionError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    print(to_json(result.report) if args.json else result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
