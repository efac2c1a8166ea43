"""
The reproduce-paper acceptance suite.

Each claim draws from its own generator, seeded with (seed, claim index), so a
claim's observations do not depend on which other claims ran before it.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from quantum_opinion.equilibrium import (
    classical_reduction_check,
    equilibrium_family,
    find_vertex_equilibria,
    grid_deviation_gap,
    maximize_joint_payoff_gm3,
    verify_profile,
)
from quantum_opinion.mw_engine import (
    MixedStrategy,
    MixedStrategy2,
    MixedStrategy3,
    QuantumGame,
    expected_payoffs,
    final_density,
    gm1_payoff_closed_form,
    gm3_entangled_payoffs_closed_form,
    gm3_joint_payoff_closed_form,
    random_strategy,
    strategy_dim,
    vertex_strategy,
)
from quantum_opinion.opinion_games import (
    MODELS,
    GameParams,
    PureProfile,
    Strategy,
    build_game,
    build_gm1,
    build_gm2,
    build_gm3,
    is_zero_sum,
    joint_payoff,
    pareto_optimal_pure,
    profiles,
    pure_nash_equilibria,
    threshold_distance,
)
from quantum_opinion.tensor_core import TOLERANCE, basis_state, random_state, superposition_state

logger = logging.getLogger(__name__)

EQUILIBRIUM_CLAIM_TOLERANCE = 1e-9
MAX_GRID_DISTANCES = (0.5, 1.0, 2.0)
THRESHOLD_OFFSET = 1e-6

KEEP_KEEP = PureProfile(Strategy.KEEP, Strategy.KEEP)
AGREE_AGREE = PureProfile(Strategy.AGREE, Strategy.AGREE)


@dataclass
class ClaimReport:
    claim_id: str
    description: str
    status: str  # 'pass' or 'fail'
    observed: List[float]
    expected: List[float]
    tolerance: float
    provenance: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def format_claim_report(report: ClaimReport) -> Dict:
    """Format a claim report for JSON output"""
    return {
        "claim_id": report.claim_id,
        "description": report.description,
        "status": report.status,
        "observed": [float(v) for v in report.observed],
        "expected": [float(v) for v in report.expected],
        "tolerance": report.tolerance,
        "provenance": report.provenance,
    }


def _report(
    claim_id: str,
    description: str,
    observed: Sequence[float],
    expected: Sequence[float],
    tolerance: float,
    provenance: str,
) -> ClaimReport:
    observed = [float(v) for v in observed]
    expected = [float(v) for v in expected]
    ok = len(observed) == len(expected) and all(
        np.isfinite(o) and abs(o - e) <= tolerance for o, e in zip(observed, expected)
    )
    return ClaimReport(claim_id, description, "pass" if ok else "fail", observed, expected, tolerance, provenance)


def _classical_params(rng: np.random.Generator) -> GameParams:
    a, b, c, d = rng.uniform(0.1, 10.0, size=4)
    return GameParams(a=float(a), b=float(b), c=float(c), d=float(d))


def _random_params(rng: np.random.Generator) -> GameParams:
    a, b, c = rng.uniform(0.1, 5.0, size=3)
    d = rng.uniform(0.2, 5.0)
    return GameParams(a=float(a), b=float(b), c=float(c), d=float(d))


def _random_quantum_game(rng: np.random.Generator, model: Optional[str] = None) -> QuantumGame:
    model = model or MODELS[int(rng.integers(len(MODELS)))]
    classical = build_game(model, _random_params(rng))
    return QuantumGame(classical, random_state(classical.n_strategies, rng))


def _entangled_gm3(params: GameParams) -> QuantumGame:
    return QuantumGame(build_gm3(params), superposition_state([(1, 1), (3, 3)], 3))


def _fraction(flags: Sequence[bool]) -> float:
    return sum(1 for flag in flags if flag) / len(flags)


# --- classical structure -------------------------------------------------


def claim_classical_zero_sum(rng: np.random.Generator, samples: int) -> ClaimReport:
    draws = [_classical_params(rng) for _ in range(samples)]
    return _report(
        "classical-zero-sum",
        "GM I and GM II are zero-sum for every parameter draw",
        [_fraction([is_zero_sum(build_gm1(p)) for p in draws]), _fraction([is_zero_sum(build_gm2(p)) for p in draws])],
        [1.0, 1.0],
        0.0,
        "classical payoff tables",
    )


def claim_classical_unique_ne(rng: np.random.Generator, samples: int) -> ClaimReport:
    draws = [_classical_params(rng) for _ in range(samples)]
    return _report(
        "classical-unique-ne",
        "(Keep, Keep) is the only pure equilibrium of GM I and GM II",
        [
            _fraction([pure_nash_equilibria(build_gm1(p)) == [KEEP_KEEP] for p in draws]),
            _fraction([pure_nash_equilibria(build_gm2(p)) == [KEEP_KEEP] for p in draws]),
        ],
        [1.0, 1.0],
        0.0,
        "classical payoff tables",
    )


def claim_gm3_non_zero_sum(rng: np.random.Generator, samples: int) -> ClaimReport:
    draws = [_classical_params(rng) for _ in range(max(1, samples // 10))]
    return _report(
        "gm3-non-zero-sum",
        "GM III is not zero-sum",
        [_fraction([not is_zero_sum(build_gm3(p)) for p in draws])],
        [1.0],
        0.0,
        "classical payoff tables",
    )


def _threshold_ok(params: GameParams, below: bool) -> bool:
    game = build_gm3(params)
    equilibria = pure_nash_equilibria(game)
    if below:
        return AGREE_AGREE in equilibria and KEEP_KEEP not in equilibria
    return KEEP_KEEP in equilibria and AGREE_AGREE not in equilibria


def claim_gm3_threshold(rng: np.random.Generator, samples: int) -> ClaimReport:
    below, above = [], []
    for _ in range(max(1, samples // 10)):
        params = _classical_params(rng)
        d_star = threshold_distance(params)
        below.append(_threshold_ok(params.model_copy(update={"d": d_star - THRESHOLD_OFFSET}), below=True))
        above.append(_threshold_ok(params.model_copy(update={"d": d_star + THRESHOLD_OFFSET}), below=False))

    # b + c a power of two keeps 1/(b+c) exact, so equality is tested without rounding
    at_equality = []
    for b, c in ((1.0, 1.0), (1.0, 3.0), (0.5, 1.5)):
        params = GameParams(a=1.0, b=b, c=c, d=1.0 / (b + c))
        equilibria = pure_nash_equilibria(build_gm3(params))
        at_equality.append(AGREE_AGREE in equilibria and KEEP_KEEP in equilibria)

    params = GameParams(a=1.0, b=1.0, c=1.0, d=0.4)
    game = build_gm3(params)
    return _report(
        "gm3-threshold",
        "GM III: (Agree, Agree) is an equilibrium iff d <= 1/(b+c), (Keep, Keep) iff d >= 1/(b+c)",
        [_fraction(below), _fraction(above), _fraction(at_equality), joint_payoff(game, AGREE_AGREE), joint_payoff(game, KEEP_KEEP)],
        [1.0, 1.0, 1.0, 4.0 / 0.4, 0.0],
        1e-12,
        "classical GM III table; joint payoff 4/d below the threshold",
    )


def claim_gm3_pareto(rng: np.random.Generator, samples: int) -> ClaimReport:
    draws = [_classical_params(rng) for _ in range(max(1, samples // 10))]
    return _report(
        "gm3-pareto",
        "(Agree, Agree) is Pareto optimal in GM III",
        [_fraction([AGREE_AGREE in pareto_optimal_pure(build_gm3(p)) for p in draws])],
        [1.0],
        0.0,
        "classical GM III table",
    )


# --- closed forms against the density-matrix pipeline ---------------------


def claim_closed_form_gm1(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(samples):
        params = _random_params(rng)
        game = QuantumGame(build_gm1(params), random_state(2, rng))
        s_a, s_b = random_strategy(2, rng), random_strategy(2, rng)
        pipeline = expected_payoffs(game, s_a, s_b)
        closed = gm1_payoff_closed_form(params, game.initial_state, s_a.p, s_b.p)
        worst = max(worst, abs(pipeline[0] - closed[0]), abs(pipeline[1] - closed[1]))
    return _report(
        "closed-form-gm1",
        "quantum GM I closed form matches the pipeline",
        [worst],
        [0.0],
        TOLERANCE,
        "closed-form quantum GM I payoff",
    )


def claim_closed_form_gm3_joint(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(samples):
        params = _random_params(rng)
        game = QuantumGame(build_gm3(params), random_state(3, rng))
        s_a, s_b = random_strategy(3, rng), random_strategy(3, rng)
        pipeline = sum(expected_payoffs(game, s_a, s_b))
        closed = gm3_joint_payoff_closed_form(params, game.initial_state, s_a.p, s_b.p)
        worst = max(worst, abs(pipeline - closed))
    return _report(
        "closed-form-gm3-joint",
        "quantum GM III joint-payoff closed form matches the pipeline",
        [worst],
        [0.0],
        TOLERANCE,
        "closed-form quantum GM III joint payoff",
    )


def claim_gm3_joint_independence(rng: np.random.Generator, samples: int) -> ClaimReport:
    spread = 0.0
    for _ in range(max(1, samples // 10)):
        params = _random_params(rng)
        game = QuantumGame(build_gm3(params), random_state(3, rng))
        p, q = rng.uniform(size=2)
        joints = []
        for _ in range(5):
            s_a = MixedStrategy3(p=float(p), p1=float(rng.uniform(0.0, 1.0 - p)))
            s_b = MixedStrategy3(p=float(q), p1=float(rng.uniform(0.0, 1.0 - q)))
            joints.append(sum(expected_payoffs(game, s_a, s_b)))
        spread = max(spread, max(joints) - min(joints))
    return _report(
        "gm3-joint-p1q1-independence",
        "quantum GM III joint payoff does not depend on p1 or q1",
        [spread],
        [0.0],
        TOLERANCE,
        "closed-form quantum GM III joint payoff has no p1, q1 terms",
    )


def claim_closed_form_gm3_entangled(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(samples):
        params = _random_params(rng)
        game = _entangled_gm3(params)
        s_a, s_b = random_strategy(3, rng), random_strategy(3, rng)
        pipeline = expected_payoffs(game, s_a, s_b)
        closed = gm3_entangled_payoffs_closed_form(params, s_a, s_b)
        worst = max(worst, abs(pipeline[0] - closed[0]), abs(pipeline[1] - closed[1]))
    return _report(
        "closed-form-gm3-entangled",
        "quantum GM III payoffs on sqrt(0.5)(|11> + |33>) match their closed form",
        [worst],
        [0.0],
        TOLERANCE,
        "closed-form entangled GM III payoffs",
    )


def claim_quantum_zero_sum(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = {"GM1": 0.0, "GM2": 0.0}
    for _ in range(samples):
        for model in worst:
            game = _random_quantum_game(rng, model)
            s_a, s_b = random_strategy(game.dim, rng), random_strategy(game.dim, rng)
            worst[model] = max(worst[model], abs(sum(expected_payoffs(game, s_a, s_b))))
    return _report(
        "quantum-zero-sum",
        "quantization keeps GM I and GM II zero-sum",
        [worst["GM1"], worst["GM2"]],
        [0.0, 0.0],
        TOLERANCE,
        "zero-sum preservation under quantization",
    )


def claim_classical_reduction(rng: np.random.Generator, samples: int) -> ClaimReport:
    params = _random_params(rng)
    results = []
    for model in MODELS:
        classical = build_game(model, params)
        n = classical.n_strategies
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                results.append(classical_reduction_check(QuantumGame(classical, basis_state(i, j, n)), i, j))
    return _report(
        "classical-reduction",
        "every basis initial state reduces each quantum game to its classical game",
        [_fraction(results), float(len(results))],
        [1.0, 22.0],
        0.0,
        "reduction to the classical game for |ij>",
    )


# --- joint-payoff maximum --------------------------------------------------


def claim_gm3_max(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for d in np.linspace(0.1, 10.0, 20):
        result = maximize_joint_payoff_gm3(GameParams(d=float(d)))
        worst = max(worst, abs(result.max_value - 4.0 / float(d)))
    return _report(
        "gm3-max",
        "the analytic maximum of the quantum GM III joint payoff is 4/d",
        [worst],
        [0.0],
        TOLERANCE,
        "maximum joint payoff 4/d",
    )


def claim_gm3_max_grid(rng: np.random.Generator, samples: int) -> ClaimReport:
    observed = [maximize_joint_payoff_gm3(GameParams(d=d), method="grid").max_value for d in MAX_GRID_DISTANCES]
    return _report(
        "gm3-max-grid",
        "the 1/10 grid oracle attains 4/d",
        observed,
        [4.0 / d for d in MAX_GRID_DISTANCES],
        TOLERANCE,
        "maximizer is a grid vertex",
    )


def claim_gm3_max_matches_classical(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(max(1, samples // 10)):
        params = _random_params(rng)
        classical = build_gm3(params)
        best_classical = max(joint_payoff(classical, profile) for profile in profiles(classical))
        worst = max(worst, abs(maximize_joint_payoff_gm3(params).max_value - best_classical))
    return _report(
        "gm3-max-matches-classical",
        "quantization does not raise the best GM III joint payoff above the classical (Agree, Agree) value",
        [worst],
        [0.0],
        TOLERANCE,
        "4/d in both the classical and the quantum game",
    )


# --- equilibria ------------------------------------------------------------


def claim_gm3_winwin(rng: np.random.Generator, samples: int) -> ClaimReport:
    d_vertex = vertex_strategy(3, "D")
    flags, dev_a, dev_b, dev_joint = [], 0.0, 0.0, 0.0
    for _ in range(max(1, samples // 10)):
        params = _random_params(rng)
        verdict = verify_profile(_entangled_gm3(params), d_vertex, d_vertex, label="D,D")
        flags.append(verdict.is_equilibrium)
        dev_a = max(dev_a, abs(verdict.payoffs[0] - 1.0 / params.d))
        dev_b = max(dev_b, abs(verdict.payoffs[1] - 1.0 / params.d))
        dev_joint = max(dev_joint, abs(verdict.joint_payoff - 2.0 / params.d))
    return _report(
        "gm3-winwin-unconditional",
        "D,D on sqrt(0.5)(|11> + |33>) is an equilibrium paying (1/d, 1/d) for any a, b, c, d",
        [_fraction(flags), dev_a, dev_b, dev_joint],
        [1.0, 0.0, 0.0, 0.0],
        TOLERANCE,
        "win-win equilibrium with joint payoff 2/d, no condition on d",
    )


def claim_deviation_gain_identity(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst_a, worst_b = 0.0, 0.0
    for _ in range(max(1, samples // 5)):
        params = _random_params(rng)
        game = _entangled_gm3(params)
        star_a, star_b = random_strategy(3, rng), random_strategy(3, rng)
        dev_a, dev_b = random_strategy(3, rng), random_strategy(3, rng)
        slope = (params.a + params.b) / 2
        gain_a = expected_payoffs(game, star_a, star_b)[0] - expected_payoffs(game, dev_a, star_b)[0]
        gain_b = expected_payoffs(game, star_a, star_b)[1] - expected_payoffs(game, star_a, dev_b)[1]
        worst_a = max(worst_a, abs(gain_a - (star_a.p1 - dev_a.p1) * slope))
        worst_b = max(worst_b, abs(gain_b - (star_b.p1 - dev_b.p1) * slope))
    return _report(
        "gm3-deviation-gain-identity",
        "deviation gains on the entangled GM III state equal (p1* - p1)(a+b)/2",
        [worst_a, worst_b],
        [0.0, 0.0],
        TOLERANCE,
        "equilibrium conditions for the entangled GM III state",
    )


def claim_gm1_vanishing_family(rng: np.random.Generator, samples: int) -> ClaimReport:
    params = _random_params(rng)
    game = QuantumGame(build_gm1(params), superposition_state([(1, 1), (2, 2)], 2))
    equilibria = find_vertex_equilibria(game)
    family = equilibrium_family(game, vertex_strategy(2, "C"), vertex_strategy(2, "C"))
    all_free = all(c.status.value == "free" for player in family.players for c in player.coordinates)
    return _report(
        "gm1-vanishing-coefficient-family",
        "with |u11|^2 = |u22|^2 = 0.5 every GM I vertex profile is an equilibrium and both coordinates are free",
        [float(len(equilibria)), float(family.kind == "product"), float(all_free)],
        [4.0, 1.0, 1.0],
        0.0,
        "derived: the equilibrium-condition coefficient vanishes",
    )


# --- property suite ----------------------------------------------------------


def claim_density_invariants(rng: np.random.Generator, samples: int) -> ClaimReport:
    trace_err, herm_err, negative = 0.0, 0.0, 0.0
    for _ in range(max(1, samples // 5)):
        game = _random_quantum_game(rng)
        rho = final_density(game, random_strategy(game.dim, rng), random_strategy(game.dim, rng)).matrix
        trace_err = max(trace_err, abs(np.trace(rho) - 1.0))
        herm_err = max(herm_err, float(np.max(np.abs(rho - rho.conj().T))))
        negative = max(negative, float(max(0.0, -np.min(np.diag(rho).real))))
    return _report(
        "density-invariants",
        "final density matrices have unit trace, are Hermitian and have a non-negative diagonal",
        [trace_err, herm_err, negative],
        [0.0, 0.0, 0.0],
        TOLERANCE,
        "derived: properties of a density matrix",
    )


def claim_phase_invariance(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(max(1, samples // 5)):
        game = _random_quantum_game(rng)
        phases = rng.uniform(0.0, 2 * np.pi, size=game.dim ** 2)
        rotated = QuantumGame(game.classical, game.initial_state.with_phases(phases))
        s_a, s_b = random_strategy(game.dim, rng), random_strategy(game.dim, rng)
        base, shifted = expected_payoffs(game, s_a, s_b), expected_payoffs(rotated, s_a, s_b)
        worst = max(worst, abs(base[0] - shifted[0]), abs(base[1] - shifted[1]))
    return _report(
        "phase-invariance",
        "payoffs depend on the initial state only through |u_ij|^2",
        [worst],
        [0.0],
        TOLERANCE,
        "derived: diagonal payoff operators",
    )


def _midpoint(s: MixedStrategy, t: MixedStrategy) -> MixedStrategy:
    if strategy_dim(s) == 2:
        return MixedStrategy2(p=(s.p + t.p) / 2)
    return MixedStrategy3(p=(s.p + t.p) / 2, p1=(s.p1 + t.p1) / 2)


def claim_multilinearity(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(max(1, samples // 5)):
        game = _random_quantum_game(rng)
        s1, s2, other = (random_strategy(game.dim, rng) for _ in range(3))
        mid = _midpoint(s1, s2)
        for player in (0, 1):
            if player == 0:
                values = [expected_payoffs(game, s, other)[0] for s in (s1, s2, mid)]
            else:
                values = [expected_payoffs(game, other, s)[1] for s in (s1, s2, mid)]
            worst = max(worst, abs(values[2] - (values[0] + values[1]) / 2))
    return _report(
        "multilinearity",
        "each payoff is affine in its own player's strategy (midpoint test)",
        [worst],
        [0.0],
        TOLERANCE,
        "derived: mixture over operator pairs",
    )


def claim_vertex_soundness(rng: np.random.Generator, samples: int) -> ClaimReport:
    worst = 0.0
    for _ in range(max(1, samples // 2)):
        game = _random_quantum_game(rng)
        s_a, s_b = random_strategy(game.dim, rng), random_strategy(game.dim, rng)
        verdict = verify_profile(game, s_a, s_b)
        worst = max(
            worst,
            abs(verdict.deviation_gap_a - grid_deviation_gap(game, s_a, s_b, "A")),
            abs(verdict.deviation_gap_b - grid_deviation_gap(game, s_a, s_b, "B")),
        )
    return _report(
        "vertex-soundness",
        "deviation gaps from vertex comparison match a 1/50 grid scan",
        [worst],
        [0.0],
        EQUILIBRIUM_CLAIM_TOLERANCE,
        "derived: best responses sit at pure-operator vertices",
    )


CLAIMS: List[Callable[[np.random.Generator, int], ClaimReport]] = [
    claim_classical_zero_sum,
    claim_classical_unique_ne,
    claim_gm3_non_zero_sum,
    claim_gm3_threshold,
    claim_gm3_pareto,
    claim_closed_form_gm1,
    claim_closed_form_gm3_joint,
    claim_gm3_joint_independence,
    claim_closed_form_gm3_entangled,
    claim_quantum_zero_sum,
    claim_classical_reduction,
    claim_gm3_max,
    claim_gm3_max_grid,
    claim_gm3_max_matches_classical,
    claim_gm3_winwin,
    claim_deviation_gain_identity,
    claim_gm1_vanishing_family,
    claim_density_invariants,
    claim_phase_invariance,
    claim_multilinearity,
    claim_vertex_soundness,
]


def run_claims(seed: int, samples: int = 1000) -> List[ClaimReport]:
    reports = []
    for index, claim in enumerate(CLAIMS):
        rng = np.random.default_rng([seed, index])
        report = claim(rng, samples)
        logger.debug("%s: %s observed=%s", report.claim_id, report.status, report.observed)
        reports.append(report)
    return reports
