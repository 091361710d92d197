"""The four built-in games and config (de)serialization helpers."""

from __future__ import annotations

from typing import Any

from ..core import GameSpec, GameState, InvalidConfig
from .euclid import euclid_spec
from .mancala import mancala_spec
from .nim import nim_spec
from .tictactoe import tictactoe_spec

GAME_NAMES = ("tictactoe", "nim", "euclid", "mancala")

_DEFAULTS: dict[str, dict[str, int]] = {
    "tictactoe": {},
    "nim": {"n": 21, "k": 3},
    "euclid": {"a": 34, "b": 21},
    "mancala": {"pits_per_side": 6, "seeds_per_pit": 4},
}


def make_spec(game: str, params: dict[str, Any] | None = None) -> GameSpec:
    """Build a spec from a game name and parameter dict (missing keys defaulted)."""
    if game not in GAME_NAMES:
        raise InvalidConfig(f"unknown game {game!r}; expected one of {GAME_NAMES}")
    merged = dict(_DEFAULTS[game])
    for key, value in (params or {}).items():
        if key not in merged and game != "tictactoe":
            raise InvalidConfig(f"{game}: unknown parameter {key!r}")
        merged[key] = int(value)
    if game == "tictactoe":
        return tictactoe_spec()
    if game == "nim":
        return nim_spec(merged["n"], merged["k"])
    if game == "euclid":
        return euclid_spec(merged["a"], merged["b"])
    return mancala_spec(merged["pits_per_side"], merged["seeds_per_pit"])


def spec_from_config(config: dict[str, Any]) -> GameSpec:
    """Rebuild a spec from a {game, params} config object.

    GameRecords store the flat parameter dict next to spec_id; rebuild those
    with ``make_spec(record.spec_id, record.config)`` instead.
    """
    if "game" in config:
        return make_spec(config["game"], config.get("params") or {})
    raise InvalidConfig(f"config missing 'game': {config!r}")


def config_object(spec: GameSpec) -> dict[str, Any]:
    """The {game, params} form used inside records and session configs."""
    return {"game": spec.id, "params": dict(spec.config)}


def describe_state(spec: GameSpec, state: GameState) -> dict[str, Any]:
    """Game-specific JSON-friendly view of a state's payload."""
    if spec.id == "tictactoe":
        return {"cells": state.payload}
    if spec.id == "nim":
        return {"remaining": state.payload, "max_take": spec.config["k"]}
    if spec.id == "euclid":
        big, small = state.payload
        return {"a": big, "b": small}
    if spec.id == "mancala":
        return {"pits": list(state.payload), "pits_per_side": spec.config["pits_per_side"]}
    raise InvalidConfig(f"unknown game {spec.id!r}")


__all__ = [
    "GAME_NAMES",
    "config_object",
    "describe_state",
    "euclid_spec",
    "make_spec",
    "mancala_spec",
    "nim_spec",
    "spec_from_config",
    "tictactoe_spec",
]
