"""Bundled game definitions shipped as package resources."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .game import GameDefinition, ValidationError, game_from_json_dict

#: Registry of bundled games addressable as ``builtin:<name>`` on the CLI.
#: "table1" is the symmetric conflicting-interest game whose classical total
#: payoff is capped at 9/4 by the two tripartite Bell inequalities.
BUILTIN_NAMES = ("table1",)


@lru_cache(maxsize=None)
def builtin_game(name: str = "table1") -> GameDefinition:
    """Load a bundled game by registry name."""
    if name not in BUILTIN_NAMES:
        raise ValidationError(
            f"unknown builtin game {name!r}; available: {BUILTIN_NAMES}"
        )
    text = (
        resources.files("bellgame").joinpath(f"data/{name}.json").read_text()
    )
    return game_from_json_dict(json.loads(text))
