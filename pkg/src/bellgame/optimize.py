"""Derivative-free maximization of the quantum payoff over measurement
angles, with gauge fixing, best-response certification and the
classical-vs-quantum advantage summary.

The objective landscape is smooth and low-dimensional (four free azimuths
once the gauge a0 = b0 = 0 is fixed), so a seeded coarse grid scan followed
by Nelder-Mead polish from the best starts finds the optimum reliably.  The
contract is the value reached, not the search path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .builtin import builtin_game
from .classical import ALL_PROFILES, BellVariant, deterministic_payoffs
from .game import (
    PLAYERS,
    GameDefinition,
    PayoffTriple,
    Player,
    ValidationError,
)
from .quantum import (
    BlochObservable,
    MeasurementSetting,
    PlanarAngles,
    QuantumAdvisor,
    ghz_advisor,
    planar_payoff,
    planar_payoff_grid,
    quantum_bell,
    quantum_payoffs,
    wrap_angle,
)

#: A candidate counts as a numerical equilibrium when no player can gain
#: more than this by a unilateral change of their own observables.
EQUILIBRIUM_IMPROVEMENT_TOL = 1e-6


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int = 12
    grid: int = 16  # scan resolution per angle
    tol: float = 1e-10  # simplex convergence tolerance on the value
    max_iter: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grid < 8:
            raise ValidationError("grid resolution must be at least 8")
        if self.tol <= 0:
            raise ValidationError("convergence tolerance must be positive")
        if self.restarts < 1 or self.max_iter < 1:
            raise ValidationError("restarts and max_iter must be positive")


@dataclass(frozen=True)
class OptimumReport:
    angles: PlanarAngles  # canonical gauge: a0 = b0 = 0
    value: float
    payoffs: PayoffTriple
    bell_values: tuple[float, float]  # (V011, V100) at the optimum
    converged: bool


def _nelder_mead(
    objective: Callable[[np.ndarray], float], x0: Sequence[float], config: OptimizationConfig
) -> tuple[np.ndarray, float, bool]:
    res = minimize(
        lambda x: -objective(x),
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        options={
            "xatol": 1e-9,
            "fatol": config.tol,
            "maxiter": config.max_iter,
            "maxfev": 4 * config.max_iter,
        },
    )
    return res.x, -float(res.fun), bool(res.success)


#: Runs whose values lie within this window of the best are treated as ties
#: and resolved by angle order.  The objective has reflection-symmetric
#: maxima of equal value; without the window the winning orbit would depend
#: on float noise between runs.
TIE_WINDOW = 1e-9


def _multistart_max(
    objective: Callable[[np.ndarray], float],
    starts: Sequence[Sequence[float]],
    config: OptimizationConfig,
) -> tuple[np.ndarray, float, bool]:
    """Best local maximum over the given starts.

    Order-independent merge: highest value wins; runs within TIE_WINDOW of
    the best count as ties, broken by lexicographic order of the wrapped
    angle vector.
    """
    results = []
    for x0 in starts:
        x, value, ok = _nelder_mead(objective, x0, config)
        results.append((value, tuple(wrap_angle(v) for v in x), x, ok))
    vmax = max(r[0] for r in results)
    tied = [r for r in results if r[0] >= vmax - TIE_WINDOW]
    winner = min(tied, key=lambda r: r[1])
    return winner[2], winner[0], winner[3]


def _min_payoff_objective(
    game: GameDefinition, advisor: QuantumAdvisor
) -> Callable[[np.ndarray], float]:
    def objective(x: np.ndarray) -> float:
        angles = PlanarAngles(0.0, x[0], 0.0, x[1], x[2], x[3])
        f = quantum_payoffs(
            game.utilities, game.prior, advisor, MeasurementSetting.planar(angles)
        )
        return min(f)

    return objective


def maximize_planar(
    config: OptimizationConfig | None = None,
    game: GameDefinition | None = None,
) -> OptimumReport:
    """Maximize the planar quantum payoff in the canonical gauge.

    For the bundled game the objective is the closed-form common payoff,
    scanned on a full grid whose top points seed the polish stage; for any
    other game it is the minimum player payoff through the trace rule (the
    guaranteed value of a fair outcome), started from the center plus the
    seeded random points.  Each start is polished by Nelder-Mead; more
    restarts can only improve the reported value (up to the tie window).
    """
    config = config or OptimizationConfig()
    advisor = ghz_advisor()
    bundled = game is None or game == builtin_game()

    rng = np.random.default_rng(config.seed)
    random_starts = rng.uniform(-math.pi, math.pi, size=(config.restarts, 4))

    if bundled:
        game = builtin_game()

        def objective(x: np.ndarray) -> float:
            return planar_payoff(PlanarAngles(0.0, x[0], 0.0, x[1], x[2], x[3]))

        axis = np.linspace(-math.pi, math.pi, config.grid, endpoint=False)
        a1, b1, c0, c1 = np.meshgrid(axis, axis, axis, axis, indexing="ij")
        values = planar_payoff_grid(0.0, a1, 0.0, b1, c0, c1)
        flat = values.ravel()
        top = np.argsort(flat)[::-1][: config.restarts]
        grid_starts = [
            (a1.ravel()[i], b1.ravel()[i], c0.ravel()[i], c1.ravel()[i])
            for i in top
        ]
        starts = grid_starts + list(random_starts)
    else:
        objective = _min_payoff_objective(game, advisor)
        starts = [np.zeros(4)] + list(random_starts)

    x, _, ok = _multistart_max(objective, starts, config)
    canonical = PlanarAngles(
        0.0, wrap_angle(x[0]), 0.0, wrap_angle(x[1]),
        wrap_angle(x[2]), wrap_angle(x[3]),
    )
    value = float(objective(np.array([canonical.a1, canonical.b1,
                                      canonical.c0, canonical.c1])))
    setting = MeasurementSetting.planar(canonical)
    payoffs = quantum_payoffs(game.utilities, game.prior, advisor, setting)
    bells = (
        quantum_bell(advisor, setting, BellVariant.V011),
        quantum_bell(advisor, setting, BellVariant.V100),
    )
    return OptimumReport(
        angles=canonical,
        value=value,
        payoffs=payoffs,
        bell_values=bells,
        converged=ok,
    )


@dataclass(frozen=True)
class PlayerBestResponse:
    player: Player
    improvement: float  # best own-payoff gain found (may be <= 0)
    payoff: float  # own payoff at the best deviation found
    observables: tuple[BlochObservable, BlochObservable]


@dataclass(frozen=True)
class BestResponseVerdict:
    mode: str  # "planar" | "full_sphere"
    baseline: PayoffTriple
    responses: tuple[PlayerBestResponse, PlayerBestResponse, PlayerBestResponse]
    threshold: float = EQUILIBRIUM_IMPROVEMENT_TOL

    @property
    def max_improvement(self) -> float:
        return max(r.improvement for r in self.responses)

    @property
    def is_equilibrium(self) -> bool:
        return self.max_improvement < self.threshold


def _deviation_observables(mode: str, x: np.ndarray) -> tuple[BlochObservable, BlochObservable]:
    if mode == "planar":
        half = math.pi / 2
        return (BlochObservable(half, x[0]), BlochObservable(half, x[1]))
    return (BlochObservable(x[0], x[1]), BlochObservable(x[2], x[3]))


def best_response_check(
    candidate: MeasurementSetting,
    mode: str = "planar",
    config: OptimizationConfig | None = None,
    game: GameDefinition | None = None,
    advisor: QuantumAdvisor | None = None,
) -> BestResponseVerdict:
    """Search each player's unilateral deviations for a payoff improvement.

    Planar mode deviates within the equatorial family (two azimuths per
    player); full-sphere mode frees the polar angles as well, probing
    whether the equatorial restriction hides profitable deviations.  The
    improvement is relative to the candidate's own payoff; the candidate's
    own observables seed the search, so the reported maximum is never
    materially negative.
    """
    if mode not in ("planar", "full_sphere"):
        raise ValidationError(f"unknown best-response mode {mode!r}")
    config = config or OptimizationConfig()
    game = game or builtin_game()
    advisor = advisor or ghz_advisor()
    baseline = quantum_payoffs(game.utilities, game.prior, advisor, candidate)

    rng = np.random.default_rng(config.seed)
    dim = 2 if mode == "planar" else 4
    responses = []
    for player in PLAYERS:
        def objective(x: np.ndarray, player: Player = player) -> float:
            deviated = candidate.replace_player(
                player, _deviation_observables(mode, x)
            )
            return float(
                quantum_payoffs(game.utilities, game.prior, advisor, deviated)[player]
            )

        own = candidate.observables(player)
        if mode == "planar":
            own_x = [own[0].phi, own[1].phi]
            res = config.grid
        else:
            own_x = [own[0].theta, own[0].phi, own[1].theta, own[1].phi]
            res = min(config.grid, 6)  # keep the 4-D scan affordable
        axes = [np.linspace(-math.pi, math.pi, res, endpoint=False)] * dim
        if mode == "full_sphere":
            axes[0] = axes[2] = np.linspace(0, math.pi, res)
        mesh = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=1)
        scores = np.array([objective(x) for x in mesh])
        top = np.argsort(scores)[::-1][:3]
        starts = [own_x] + [mesh[i] for i in top] + list(
            rng.uniform(-math.pi, math.pi, size=(min(config.restarts, 8), dim))
        )
        x, value, _ = _multistart_max(objective, starts, config)
        responses.append(
            PlayerBestResponse(
                player=player,
                improvement=value - float(baseline[player]),
                payoff=value,
                observables=_deviation_observables(mode, x),
            )
        )
    return BestResponseVerdict(mode=mode, baseline=baseline, responses=tuple(responses))


@dataclass(frozen=True)
class QuantumAdvantageReport:
    classical_total_bound: Fraction  # exact max total over deterministic profiles
    classical_fair_cap: Fraction  # bound / 3: best fair classical payoff
    optimum: OptimumReport
    advantage: float  # quantum fair value minus the classical fair cap
    quantum_total: float
    beats_classical: bool


def quantum_advantage_report(
    game: GameDefinition | None = None,
    config: OptimizationConfig | None = None,
) -> QuantumAdvantageReport:
    """Side-by-side of the classical fair cap and the quantum optimum."""
    game = game or builtin_game()
    totals = [
        deterministic_payoffs(game.utilities, game.prior, prof).total()
        for prof in ALL_PROFILES
    ]
    bound = max(totals)
    cap = bound / 3
    optimum = maximize_planar(config, game)
    quantum_total = float(sum(optimum.payoffs))
    return QuantumAdvantageReport(
        classical_total_bound=bound,
        classical_fair_cap=cap,
        optimum=optimum,
        advantage=optimum.value - float(cap),
        quantum_total=quantum_total,
        beats_classical=optimum.value > float(cap),
    )
