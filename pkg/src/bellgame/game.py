"""Exact-arithmetic core for three-player Bayesian games with binary types.

Players A, B, C each receive a private type bit and answer with an action
bit.  A game is a utility table u_i(x, y) over type profiles x and action
profiles y together with a prior over type profiles.  Every advisor kind
(classical or quantum) enters payoff computations only through the
conditional distribution p(y | x), so expected payoffs are a single bilinear
form shared by both engines.

All classical-path arithmetic uses ``fractions.Fraction`` so that payoff
comparisons and equilibrium checks are exact; quantum-path distributions
carry floats and are validated against explicit tolerances.

Profile indexing convention: a profile (a, b, c) of bits for players
(A, B, C) maps to index 4*a + 2*b + c, i.e. player A owns the most
significant bit.  Serialized tables use the same index order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable, NamedTuple, Sequence, Union

Bit = int
Profile = tuple[Bit, Bit, Bit]
Numeric = Union[Fraction, float]

#: All 8 bit triples in index order (A bit most significant).
PROFILES: tuple[Profile, ...] = tuple(product((0, 1), repeat=3))

DEFAULT_TOL = 1e-9


class Player(IntEnum):
    """The three players, ordered A < B < C for canonical serialization."""

    A = 0
    B = 1
    C = 2


PLAYERS = (Player.A, Player.B, Player.C)

#: Player transpositions checked by the symmetry audit, with the bystander.
TRANSPOSITIONS = (
    (Player.A, Player.B, Player.C),
    (Player.A, Player.C, Player.B),
    (Player.B, Player.C, Player.A),
)


class ValidationError(ValueError):
    """Raised when a game object or input file violates an invariant."""


def profile_index(p: Profile) -> int:
    return 4 * p[0] + 2 * p[1] + p[2]


def swap_profile(p: Profile, i: Player, j: Player) -> Profile:
    out = list(p)
    out[i], out[j] = out[j], out[i]
    return (out[0], out[1], out[2])


class PayoffTriple(NamedTuple):
    """Expected payoff per player; Fractions on the exact path, else floats."""

    a: Numeric
    b: Numeric
    c: Numeric

    def total(self) -> Numeric:
        return self.a + self.b + self.c

    def is_fair(self) -> bool:
        return self.a == self.b == self.c

    def permuted(self, perm: Sequence[int]) -> "PayoffTriple":
        """Payoffs after relabelling players: entry i comes from perm[i]."""
        return PayoffTriple(self[perm[0]], self[perm[1]], self[perm[2]])


@dataclass(frozen=True)
class UtilityTable:
    """Dense 3 x 8 x 8 table of exact player utilities.

    ``values[player][x_index][y_index]`` is the gain of ``player`` when the
    type profile is x and the action profile is y.
    """

    values: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self) -> None:
        if len(self.values) != 3 or any(
            len(rows) != 8 or any(len(row) != 8 for row in rows)
            for rows in self.values
        ):
            raise ValidationError("utility table must be 3 x 8 x 8")

    @classmethod
    def from_function(
        cls, fn: Callable[[Player, Profile, Profile], Numeric]
    ) -> "UtilityTable":
        return cls(
            tuple(
                tuple(
                    tuple(Fraction(fn(p, x, y)) for y in PROFILES)
                    for x in PROFILES
                )
                for p in PLAYERS
            )
        )

    @classmethod
    def constant(cls, value: Numeric) -> "UtilityTable":
        v = Fraction(value)
        return cls.from_function(lambda p, x, y: v)

    def utility(self, player: Player, x: Profile, y: Profile) -> Fraction:
        return self.values[player][profile_index(x)][profile_index(y)]

    def min_entry(self) -> Fraction:
        return min(v for rows in self.values for row in rows for v in row)


@dataclass(frozen=True)
class Prior:
    """Distribution over type profiles, exact and normalized."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != 8:
            raise ValidationError("prior must have 8 entries")
        for i, w in enumerate(self.weights):
            if w < 0:
                raise ValidationError(
                    f"prior entry for type profile {PROFILES[i]} is negative: {w}"
                )
        total = sum(self.weights)
        if total != 1:
            raise ValidationError(
                f"prior entries sum to {total}, expected exactly 1"
            )

    @classmethod
    def uniform(cls) -> "Prior":
        return cls((Fraction(1, 8),) * 8)

    def weight(self, x: Profile) -> Fraction:
        return self.weights[profile_index(x)]


@dataclass(frozen=True)
class ConditionalDistribution:
    """Row-stochastic table p(y | x): rows indexed by type profile x.

    Entries are Fractions for classical sources (validated exactly) or
    floats for quantum sources (validated within a tolerance).
    """

    rows: tuple[tuple[Numeric, ...], ...]

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Numeric]]
    ) -> "ConditionalDistribution":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def uniform(cls) -> "ConditionalDistribution":
        return cls(((Fraction(1, 8),) * 8,) * 8)

    @classmethod
    def point_mass(cls, y: Profile) -> "ConditionalDistribution":
        row = tuple(
            Fraction(1) if i == profile_index(y) else Fraction(0)
            for i in range(8)
        )
        return cls((row,) * 8)

    def prob(self, y: Profile, x: Profile) -> Numeric:
        return self.rows[profile_index(x)][profile_index(y)]

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for row in self.rows for v in row)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        """Check nonnegativity and row normalization, naming the bad row."""
        if len(self.rows) != 8 or any(len(row) != 8 for row in self.rows):
            raise ValidationError("conditional distribution must be 8 x 8")
        for xi, row in enumerate(self.rows):
            for v in row:
                if v < -tol:
                    raise ValidationError(
                        f"negative probability {v} in row for type profile "
                        f"{PROFILES[xi]}"
                    )
            s = sum(row)
            if abs(s - 1) > tol:
                raise ValidationError(
                    f"row for type profile {PROFILES[xi]} sums to {s}, "
                    f"expected 1"
                )


def expected_payoffs(
    table: UtilityTable,
    prior: Prior,
    dist: ConditionalDistribution,
    *,
    validate: bool = True,
    tol: float = DEFAULT_TOL,
) -> PayoffTriple:
    """Average payoff of each player under the advice distribution.

    F_i = sum over (x, y) of P(x) p(y|x) u_i(x, y).  Exact (Fraction)
    whenever the prior, utilities and distribution are all exact.
    """
    if validate:
        dist.validate(tol)
    out = []
    for player in PLAYERS:
        u = table.values[player]
        total: Numeric = 0
        for xi in range(8):
            row = dist.rows[xi]
            urow = u[xi]
            acc: Numeric = 0
            for yi in range(8):
                acc += row[yi] * urow[yi]
            total += prior.weights[xi] * acc
        out.append(total)
    return PayoffTriple(*out)


class SymmetryViolation(NamedTuple):
    """One failed permutation relation of the utility table."""

    swap: tuple[Player, Player]
    player: Player
    x: Profile
    y: Profile
    lhs: Fraction
    rhs: Fraction


def check_player_symmetry(table: UtilityTable) -> list[SymmetryViolation]:
    """Audit invariance of the game under all three player transpositions.

    For each transposition (i, j) with bystander k the table must satisfy
    u_i(x, y) = u_j(sx, sy) and u_k(x, y) = u_k(sx, sy), where s swaps the
    i and j slots of both profiles.  Returns every failing relation.
    """
    violations = []
    for i, j, k in TRANSPOSITIONS:
        for x in PROFILES:
            sx = swap_profile(x, i, j)
            for y in PROFILES:
                sy = swap_profile(y, i, j)
                lhs = table.utility(i, x, y)
                rhs = table.utility(j, sx, sy)
                if lhs != rhs:
                    violations.append(
                        SymmetryViolation((i, j), i, x, y, lhs, rhs)
                    )
                lhs_k = table.utility(k, x, y)
                rhs_k = table.utility(k, sx, sy)
                if lhs_k != rhs_k:
                    violations.append(
                        SymmetryViolation((i, j), k, x, y, lhs_k, rhs_k)
                    )
    return violations


def affine_transform(
    table: UtilityTable, alpha: Numeric, beta: Numeric
) -> UtilityTable:
    """Rescale utilities u -> alpha*u + beta; preserves best responses.

    alpha must be positive, otherwise preferences would flip.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha <= 0:
        raise ValidationError(f"affine scale must be positive, got {alpha}")
    return UtilityTable(
        tuple(
            tuple(tuple(alpha * v + beta for v in row) for row in rows)
            for rows in table.values
        )
    )


class NoSignallingViolation(NamedTuple):
    """A marginal of two players that depends on the third player's type."""

    player: Player  # whose type moves the other players' marginal
    other_types: tuple[Bit, Bit]
    other_actions: tuple[Bit, Bit]
    lhs: Numeric  # marginal with player's type = 0
    rhs: Numeric  # marginal with player's type = 1


def check_no_signalling(
    dist: ConditionalDistribution, tol: float = DEFAULT_TOL
) -> list[NoSignallingViolation]:
    """Check that each two-player marginal ignores the third player's type.

    For every player s: summing p(y|x) over y_s must give the same value
    whether x_s is 0 or 1, for all types and actions of the other two
    players.  Empty result means no-signalling holds within tol.
    """
    violations = []
    for s in PLAYERS:
        others = [p for p in PLAYERS if p != s]
        for ot in product((0, 1), repeat=2):
            for oa in product((0, 1), repeat=2):
                marg = []
                for xs in (0, 1):
                    x = [0, 0, 0]
                    x[s] = xs
                    x[others[0]], x[others[1]] = ot
                    total: Numeric = 0
                    for ys in (0, 1):
                        y = [0, 0, 0]
                        y[s] = ys
                        y[others[0]], y[others[1]] = oa
                        total += dist.prob(
                            (y[0], y[1], y[2]), (x[0], x[1], x[2])
                        )
                    marg.append(total)
                if abs(marg[0] - marg[1]) > tol:
                    violations.append(
                        NoSignallingViolation(s, ot, oa, marg[0], marg[1])
                    )
    return violations


# ---------------------------------------------------------------------------
# Game-definition file format
#
# {"players": ["A", "B", "C"],
#  "prior": {"0 0 0": "1/8", ...},                    # keyed "x_A x_B x_C"
#  "utilities": {"A": [[...8 rationals...] x 8], ...}} # [x_index][y_index]
#
# Rationals are "num/den" strings; bare integers are accepted on input.
# The JSON schema ships in docs/game.schema.json.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GameDefinition:
    """A utility table with its prior, as read from a game file."""

    utilities: UtilityTable
    prior: Prior


def format_rational(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_rational(s: str, field: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{field}: invalid rational {s!r}") from exc


def game_to_json_dict(game: GameDefinition) -> dict:
    prior = {
        " ".join(str(b) for b in x): format_rational(game.prior.weight(x))
        for x in PROFILES
    }
    utilities = {
        p.name: [
            [format_rational(v) for v in row]
            for row in game.utilities.values[p]
        ]
        for p in PLAYERS
    }
    return {"players": ["A", "B", "C"], "prior": prior, "utilities": utilities}


def game_from_json_dict(doc: dict) -> GameDefinition:
    if not isinstance(doc, dict):
        raise ValidationError("game document must be a JSON object")
    if doc.get("players") != ["A", "B", "C"]:
        raise ValidationError('players: must be exactly ["A", "B", "C"]')

    prior_doc = doc.get("prior")
    if not isinstance(prior_doc, dict):
        raise ValidationError("prior: missing or not an object")
    weights = []
    for x in PROFILES:
        key = " ".join(str(b) for b in x)
        if key not in prior_doc:
            raise ValidationError(f"prior: missing entry for type {key!r}")
        weights.append(parse_rational(prior_doc[key], f"prior[{key!r}]"))
    extra = set(prior_doc) - {" ".join(str(b) for b in x) for x in PROFILES}
    if extra:
        raise ValidationError(f"prior: unexpected keys {sorted(extra)}")
    prior = Prior(tuple(weights))

    util_doc = doc.get("utilities")
    if not isinstance(util_doc, dict):
        raise ValidationError("utilities: missing or not an object")
    tables = []
    for p in PLAYERS:
        rows_doc = util_doc.get(p.name)
        if not isinstance(rows_doc, list) or len(rows_doc) != 8:
            raise ValidationError(
                f"utilities[{p.name!r}]: expected 8 rows (one per type index)"
            )
        rows = []
        for xi, row_doc in enumerate(rows_doc):
            if not isinstance(row_doc, list) or len(row_doc) != 8:
                raise ValidationError(
                    f"utilities[{p.name!r}][{xi}]: expected 8 entries"
                )
            rows.append(
                tuple(
                    parse_rational(v, f"utilities[{p.name!r}][{xi}][{yi}]")
                    for yi, v in enumerate(row_doc)
                )
            )
        tables.append(tuple(rows))
    return GameDefinition(UtilityTable(tuple(tables)), prior)


def dump_game(game: GameDefinition, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(game_to_json_dict(game), indent=2) + "\n"
    )


def load_game(path: str | Path) -> GameDefinition:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    try:
        return game_from_json_dict(doc)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def game_digest(game: GameDefinition) -> str:
    """Stable sha256 of the canonical serialized game."""
    blob = json.dumps(
        game_to_json_dict(game), sort_keys=True, separators=(",", ":")
    )
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()
