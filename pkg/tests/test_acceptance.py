"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s``).

Tolerances are pinned here and nowhere else: exact rational comparison on
the classical path, 1e-12 for algebraic identities, 1e-10 for closed-form
versus trace equivalence, 1e-6 around the optimizer, 1e-3 against the
reference four-digit values.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from bellgame.classical import (
    ALL_PROFILES,
    BellVariant,
    bell_expression,
    classical_bound_audit,
    deterministic_payoffs,
    enumerate_deterministic_equilibria,
    strategy_to_distribution,
)
from bellgame.game import Player, affine_transform, check_no_signalling
from bellgame.optimize import (
    EQUILIBRIUM_IMPROVEMENT_TOL,
    best_response_check,
    maximize_planar,
)
from bellgame.quantum import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochObservable,
    MeasurementSetting,
    PlanarAngles,
    gauge_equivalent,
    ghz_single_party_marginal,
    planar_payoff,
    quantum_distribution,
    quantum_payoffs,
)

F = Fraction

KNOWN_EQUILIBRIA = {
    ((0, 1), (0, 0), (0, 0)): (F(5, 8), F(13, 16), F(13, 16)),
    ((0, 0), (0, 1), (0, 0)): (F(13, 16), F(5, 8), F(13, 16)),
    ((0, 0), (0, 0), (0, 1)): (F(13, 16), F(13, 16), F(5, 8)),
    ((1, 0), (0, 1), (0, 1)): (F(11, 8), F(7, 16), F(7, 16)),
    ((0, 1), (1, 0), (0, 1)): (F(7, 16), F(11, 8), F(7, 16)),
    ((0, 1), (0, 1), (1, 0)): (F(7, 16), F(7, 16), F(11, 8)),
    ((0, 1), (1, 1), (1, 1)): (F(3, 4), F(3, 4), F(3, 4)),
    ((1, 1), (0, 1), (1, 1)): (F(3, 4), F(3, 4), F(3, 4)),
    ((1, 1), (1, 1), (0, 1)): (F(3, 4), F(3, 4), F(3, 4)),
}

BOUND = F(9, 4)
ANALYTIC_OPTIMUM = (13 + 2 * math.sqrt(13)) / 24
REFERENCE_ANGLES = PlanarAngles(0.0, -math.pi / 2, 0.0, -math.pi / 2, 2.1588, 0.5880)
SEED = 0


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def optimum():
    return maximize_planar()


def test_criterion_01_known_equilibria_reproduced_exactly(table1):
    started = time.perf_counter()
    reports = enumerate_deterministic_equilibria(table1.utilities, table1.prior)
    elapsed = time.perf_counter() - started
    found = {r.profile: tuple(r.payoffs) for r in reports}
    ok = (
        len(reports) == 9
        and found == KNOWN_EQUILIBRIA
        and sum(r.fair for r in reports) == 3
        and all(r.saturates_bound for r in reports)
        and elapsed < 1.0
    )
    report(
        "criterion 1: nine equilibria with exact payoffs",
        ok,
        f"{len(reports)} equilibria in {elapsed:.3f}s",
    )


def test_criterion_02_classical_total_payoff_bound(table1):
    started = time.perf_counter()
    totals = {
        prof: deterministic_payoffs(table1.utilities, table1.prior, prof).total()
        for prof in ALL_PROFILES
    }
    audit = classical_bound_audit(table1.utilities, table1.prior, samples=1000, seed=SEED)
    elapsed = time.perf_counter() - started
    ok = (
        all(total <= BOUND for total in totals.values())
        and max(totals.values()) == BOUND
        and all(totals[prof] == BOUND for prof in KNOWN_EQUILIBRIA)
        and audit.samples == 1000
        and audit.samples_within_bound
        and audit.sample_max is not None
        and audit.sample_max <= BOUND
        and elapsed < 5.0
    )
    report(
        "criterion 2: total payoff <= 9/4, equality on all nine equilibria",
        ok,
        f"deterministic max {max(totals.values())}, "
        f"sampled max {audit.sample_max} over 1000 mixtures, {elapsed:.2f}s",
    )


def test_criterion_03_bell_bound_classical():
    started = time.perf_counter()
    values = {
        variant: [
            bell_expression(strategy_to_distribution(prof), variant)
            for prof in ALL_PROFILES
        ]
        for variant in BellVariant
    }
    elapsed = time.perf_counter() - started
    ok = all(
        all(abs(v) <= 2 for v in vals) and max(vals) == 2 and min(vals) == -2
        for vals in values.values()
    ) and elapsed < 1.0
    report(
        "criterion 3: |Bell| <= 2 on all 64 profiles, value 2 attained",
        ok,
        f"extremes {[ (min(v), max(v)) for v in values.values() ]}, {elapsed:.3f}s",
    )


def test_criterion_04_quantum_optimum(optimum):
    started = time.perf_counter()
    rerun = maximize_planar()
    elapsed = time.perf_counter() - started
    ok = (
        abs(optimum.value - 0.842) < 1e-3
        and abs(optimum.value - ANALYTIC_OPTIMUM) < 1e-6
        and gauge_equivalent(optimum.angles, REFERENCE_ANGLES, tol=1e-3)
        and optimum.converged
        and rerun == optimum
        and elapsed < 30.0
    )
    report(
        "criterion 4: planar optimum hits the reference value and angles",
        ok,
        f"value {optimum.value:.9f} vs analytic {ANALYTIC_OPTIMUM:.9f}, "
        f"{elapsed:.2f}s",
    )


def test_criterion_05_quantum_beats_classical(optimum):
    ok = optimum.value > 3 / 4 + 0.09 and 3 * optimum.value > 9 / 4
    report(
        "criterion 5: quantum value beats every classical fair equilibrium",
        ok,
        f"value {optimum.value:.6f} > 0.84, total {3 * optimum.value:.6f} > 2.25",
    )


def test_criterion_06_closed_form_equivalence(table1, ghz):
    started = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        angles = PlanarAngles(*rng.uniform(-math.pi, math.pi, 6))
        closed = planar_payoff(angles)
        payoffs = quantum_payoffs(
            table1.utilities, table1.prior, ghz, MeasurementSetting.planar(angles)
        )
        worst = max(worst, max(abs(v - closed) for v in payoffs))
    elapsed = time.perf_counter() - started
    ok = worst < 1e-10 and elapsed < 30.0
    report(
        "criterion 6: closed form equals trace payoffs for all players",
        ok,
        f"max deviation {worst:.2e} over 1000 settings, {elapsed:.2f}s",
    )


def test_criterion_07_no_signalling(ghz):
    rng = np.random.default_rng(SEED)
    worst_violations = 0
    for i in range(1000):
        if i % 2 == 0:
            setting = MeasurementSetting.planar(
                PlanarAngles(*rng.uniform(-math.pi, math.pi, 6))
            )
        else:
            setting = MeasurementSetting(
                *(
                    tuple(
                        BlochObservable(
                            rng.uniform(0, math.pi),
                            rng.uniform(-math.pi, math.pi),
                        )
                        for _ in range(2)
                    )
                    for _ in range(3)
                )
            )
        dist = quantum_distribution(ghz, setting)
        worst_violations += len(check_no_signalling(dist, tol=1e-12))
    ok = worst_violations == 0
    report(
        "criterion 7: no-signalling within 1e-12 for 1000 settings",
        ok,
        f"{worst_violations} violations (planar and tilted settings)",
    )


def test_criterion_08_unfair_equilibria_not_quantum_realizable():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        z = rng.uniform(-1, 1)
        phi = rng.uniform(-math.pi, math.pi)
        s = math.sqrt(1 - z * z)
        projector = (
            np.eye(2)
            + s * math.cos(phi) * PAULI_X
            + s * math.sin(phi) * PAULI_Y
            + z * PAULI_Z
        ) / 2
        for party in Player:
            worst = max(
                worst, abs(ghz_single_party_marginal(projector, party) - 0.5)
            )
    ok = worst <= 1e-12
    report(
        "criterion 8: every single-party marginal is 1/2 (no deterministic "
        "marginal is reachable)",
        ok,
        f"max |marginal - 1/2| = {worst:.2e} over 1000 projectors x 3 parties",
    )


def test_criterion_09_optimum_is_certified_equilibrium(optimum):
    verdict = best_response_check(
        MeasurementSetting.planar(optimum.angles), mode="planar"
    )
    ok = verdict.is_equilibrium and all(
        r.improvement < EQUILIBRIUM_IMPROVEMENT_TOL for r in verdict.responses
    )
    report(
        "criterion 9: no player improves by more than 1e-6 at the optimum",
        ok,
        "improvements "
        + ", ".join(f"{r.player.name}: {r.improvement:.2e}" for r in verdict.responses),
    )


def test_criterion_10_equilibrium_set_invariant_under_affine_maps(table1):
    base = {
        r.profile
        for r in enumerate_deterministic_equilibria(table1.utilities, table1.prior)
    }
    rng = random.Random(SEED)
    checked = 0
    for _ in range(100):
        alpha = F(rng.randint(1, 60), rng.randint(1, 60))
        beta = F(rng.randint(-60, 60), rng.randint(1, 60))
        moved = {
            r.profile
            for r in enumerate_deterministic_equilibria(
                affine_transform(table1.utilities, alpha, beta), table1.prior
            )
        }
        if moved != base:
            report(
                "criterion 10: equilibrium set invariant under affine maps",
                False,
                f"changed under alpha={alpha}, beta={beta}",
            )
        checked += 1
    report(
        "criterion 10: equilibrium set invariant under affine maps",
        checked == 100,
        f"{checked} random (alpha, beta) pairs, exact profile-set equality",
    )
