"""Command-line entry point emitting reproducible JSON reports.

Subcommands: equilibria, audit-bound, bell, optimize, check.  Games are
addressed as ``builtin:table1`` or a path to a game-definition file.  Every
report carries the command, input digests, engine version and wall time;
the ``results`` payload is deterministic for fixed inputs and seed.

Exit codes: 0 success, 2 validation failure, 3 non-convergence, 4 I/O.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .builtin import builtin_game
from .classical import (
    ALL_PROFILES,
    BellVariant,
    EquilibriumReport,
    classical_bound_audit,
    deterministic_bell_extremes,
    deterministic_payoffs,
    enumerate_deterministic_equilibria,
)
from .game import (
    GameDefinition,
    PayoffTriple,
    ValidationError,
    check_no_signalling,
    check_player_symmetry,
    expected_payoffs,
    format_rational,
    game_digest,
    load_game,
)
from .optimize import (
    BestResponseVerdict,
    OptimizationConfig,
    OptimumReport,
    best_response_check,
    quantum_advantage_report,
)
from .quantum import (
    MeasurementSetting,
    ghz_advisor,
    load_setting,
    quantum_bell,
    quantum_distribution,
    setting_to_json_dict,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4


def fmt_real(x: float) -> float:
    """Round a float through 12 significant digits for stable reports."""
    return float(f"{float(x):.12g}")


def fmt_payoffs(payoffs: PayoffTriple) -> dict:
    out = {}
    for name, v in zip("ABC", payoffs):
        out[name] = format_rational(v) if isinstance(v, Fraction) else fmt_real(v)
    return out


def fmt_profile(profile) -> dict:
    return {name: list(strategy) for name, strategy in zip("ABC", profile)}


def fmt_equilibrium(report: EquilibriumReport) -> dict:
    return {
        "profile": fmt_profile(report.profile),
        "payoffs": fmt_payoffs(report.payoffs),
        "fair": report.fair,
        "saturates_bound": report.saturates_bound,
    }


def fmt_planar_angles(angles) -> dict:
    keys = ["phi_A0", "phi_A1", "phi_B0", "phi_B1", "phi_C0", "phi_C1"]
    return {k: fmt_real(v) for k, v in zip(keys, angles)}


def fmt_optimum(report: OptimumReport) -> dict:
    return {
        "angles": fmt_planar_angles(report.angles),
        "value": fmt_real(report.value),
        "payoffs": fmt_payoffs(report.payoffs),
        "bell_values": {
            "V011": fmt_real(report.bell_values[0]),
            "V100": fmt_real(report.bell_values[1]),
        },
        "converged": report.converged,
    }


def fmt_best_response(verdict: BestResponseVerdict) -> dict:
    return {
        "mode": verdict.mode,
        "baseline": fmt_payoffs(verdict.baseline),
        "improvements": {
            r.player.name: fmt_real(r.improvement) for r in verdict.responses
        },
        "max_improvement": fmt_real(verdict.max_improvement),
        "threshold": verdict.threshold,
        "certified_equilibrium": verdict.is_equilibrium,
    }


def _resolve_game(selector: str) -> GameDefinition:
    if selector.startswith("builtin:"):
        return builtin_game(selector.split(":", 1)[1])
    game = load_game(selector)
    violations = check_player_symmetry(game.utilities)
    if violations:
        v = violations[0]
        print(
            f"warning: {selector}: utilities are not player-symmetric "
            f"({len(violations)} relations fail; first: swap "
            f"{v.swap[0].name}{v.swap[1].name} at x={v.x} y={v.y})",
            file=sys.stderr,
        )
    return game


def _setting_digest(setting: MeasurementSetting) -> str:
    blob = json.dumps(setting_to_json_dict(setting), sort_keys=True)
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def _write_report(
    out: str,
    command: str,
    game: GameDefinition,
    results: dict,
    started: float,
    inputs: dict | None = None,
) -> None:
    report = {
        "command": command,
        "inputs": {"game_digest": game_digest(game), **(inputs or {})},
        "engine_version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 6),
        "results": results,
    }
    text = json.dumps(report, indent=2) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config_from_args(args) -> OptimizationConfig:
    return OptimizationConfig(
        restarts=args.restarts, grid=args.grid, tol=args.tol, seed=args.seed
    )


def cmd_equilibria(args) -> int:
    started = time.perf_counter()
    game = _resolve_game(args.game)
    bound = max(
        deterministic_payoffs(game.utilities, game.prior, prof).total()
        for prof in ALL_PROFILES
    )
    reports = enumerate_deterministic_equilibria(game.utilities, game.prior, bound)
    results = {
        "total_payoff_bound": format_rational(bound),
        "count": len(reports),
        "equilibria": [fmt_equilibrium(r) for r in reports],
    }
    _write_report(args.out, "equilibria", game, results, started)
    return EXIT_OK


def cmd_audit_bound(args) -> int:
    started = time.perf_counter()
    game = _resolve_game(args.game)
    audit = classical_bound_audit(
        game.utilities, game.prior, samples=args.samples, seed=args.seed
    )
    extremes = deterministic_bell_extremes()
    results = {
        "deterministic": {
            "max_total": format_rational(audit.deterministic_max),
            "attainer_count": len(audit.attaining_profiles),
            "attainers": [fmt_profile(p) for p in audit.attaining_profiles],
        },
        "samples": {
            "count": audit.samples,
            "seed": audit.seed,
            "max_total": (
                format_rational(audit.sample_max)
                if audit.sample_max is not None
                else None
            ),
            "within_bound": audit.samples_within_bound,
        },
        "fair_cap": format_rational(audit.fair_cap),
        "max_min_payoff": format_rational(audit.max_min_payoff),
        "bell_extremes": {
            variant.name: {
                "min": format_rational(lo),
                "max": format_rational(hi),
            }
            for variant, (lo, hi) in extremes.items()
        },
    }
    _write_report(args.out, "audit-bound", game, results, started)
    return EXIT_OK


def cmd_bell(args) -> int:
    started = time.perf_counter()
    game = _resolve_game(args.game)
    if args.setting is None:
        extremes = deterministic_bell_extremes()
        results = {
            "source": "deterministic-profiles",
            "classical_bound": 2,
            "extremes": {
                variant.name: {
                    "min": format_rational(lo),
                    "max": format_rational(hi),
                }
                for variant, (lo, hi) in extremes.items()
            },
        }
        inputs = None
    else:
        setting = load_setting(args.setting)
        advisor = ghz_advisor()
        values = {
            variant.name: fmt_real(quantum_bell(advisor, setting, variant))
            for variant in BellVariant
        }
        results = {
            "source": "ghz-advisor",
            "setting": {k: fmt_real(v) for k, v in setting_to_json_dict(setting).items()},
            "values": values,
            "difference": fmt_real(values["V011"] - values["V100"]),
        }
        inputs = {"setting_digest": _setting_digest(setting)}
    _write_report(args.out, "bell", game, results, started, inputs)
    return EXIT_OK


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    game = _resolve_game(args.game)
    config = _config_from_args(args)
    report = quantum_advantage_report(game, config)
    results = {
        "optimum": fmt_optimum(report.optimum),
        "advantage": {
            "classical_total_bound": format_rational(report.classical_total_bound),
            "classical_fair_cap": format_rational(report.classical_fair_cap),
            "quantum_value": fmt_real(report.optimum.value),
            "quantum_total": fmt_real(report.quantum_total),
            "advantage": fmt_real(report.advantage),
            "beats_classical": report.beats_classical,
        },
        "config": {
            "restarts": config.restarts,
            "grid": config.grid,
            "tol": config.tol,
            "seed": config.seed,
        },
    }
    _write_report(args.out, "optimize", game, results, started)
    return EXIT_OK if report.optimum.converged else EXIT_NO_CONVERGENCE


def cmd_check(args) -> int:
    started = time.perf_counter()
    game = _resolve_game(args.game)
    setting = load_setting(args.setting)
    advisor = ghz_advisor()
    dist = quantum_distribution(advisor, setting)
    dist.validate(1e-9)
    row_err = max(abs(sum(row) - 1) for row in dist.rows)
    min_entry = min(v for row in dist.rows for v in row)
    # tol=-1 turns every marginal comparison into a reported pair, which
    # makes the largest residual observable.
    residual = max(
        (abs(v.lhs - v.rhs) for v in check_no_signalling(dist, tol=-1.0)),
        default=0.0,
    )
    payoffs = expected_payoffs(game.utilities, game.prior, dist)
    mode = "planar" if args.mode == "planar" else "full_sphere"
    verdict = best_response_check(
        setting, mode, _config_from_args(args), game, advisor
    )
    results = {
        "setting": {k: fmt_real(v) for k, v in setting_to_json_dict(setting).items()},
        "planar": setting.is_planar(),
        "payoffs": fmt_payoffs(payoffs),
        "row_sum_max_error": fmt_real(row_err),
        "min_probability": fmt_real(min_entry),
        "no_signalling_max_residual": fmt_real(residual),
        "bell_values": {
            variant.name: fmt_real(quantum_bell(advisor, setting, variant))
            for variant in BellVariant
        },
        "best_response": fmt_best_response(verdict),
    }
    _write_report(
        args.out,
        "check",
        game,
        results,
        started,
        {"setting_digest": _setting_digest(setting)},
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellgame",
        description=(
            "Three-player Bayesian game engine: classical equilibrium "
            "enumeration, Bell-bound audits and GHZ-advisor optimization."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--game",
            default="builtin:table1",
            help="game file path or builtin:<name> (default builtin:table1)",
        )
        p.add_argument("--out", default="-", help="output path (default stdout)")

    def add_config(p):
        p.add_argument("--restarts", type=int, default=12)
        p.add_argument("--grid", type=int, default=16)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("equilibria", help="enumerate deterministic Nash equilibria")
    add_common(p)
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser(
        "audit-bound", help="verify the classical total-payoff bound"
    )
    add_common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit_bound)

    p = sub.add_parser("bell", help="evaluate the two Bell expressions")
    add_common(p)
    p.add_argument(
        "--setting", default=None, help="measurement-setting JSON (GHZ advisor)"
    )
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("optimize", help="maximize the quantum payoff")
    add_common(p)
    add_config(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("check", help="analyze a measurement setting")
    add_common(p)
    p.add_argument("--setting", required=True, help="measurement-setting JSON")
    p.add_argument("--mode", choices=["planar", "full"], default="planar")
    add_config(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
