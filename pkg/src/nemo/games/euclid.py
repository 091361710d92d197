"""The subtraction game on two piles: remove any multiple of the smaller pile
from the larger; producing an empty pile wins for the mover."""

from __future__ import annotations

from ..core import GameSpec, GameState, InvalidConfig, Outcome, PlayerId, format_key, win_for


def normalize(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a >= b else (b, a)


def euclid_spec(a: int, b: int) -> GameSpec:
    if a < 1 or b < 1:
        raise InvalidConfig(f"both piles must start >= 1, got a={a}, b={b}")

    def legal(state: GameState) -> list[int]:
        big, small = state.payload
        return list(range(1, big // small + 1))

    def transition(state: GameState, action: int) -> GameState:
        big, small = state.payload
        return GameState(state.to_move.opponent(), normalize(big - action * small, small))

    def terminal(state: GameState) -> bool:
        return state.payload[1] == 0

    def outcome(state: GameState) -> Outcome:
        # The mover who produced the zero pile wins; to_move already flipped past them.
        return Outcome(win_for(state.to_move.opponent()))

    def canonical(state: GameState) -> str:
        big, small = state.payload
        return format_key("E", state, f"{big},{small}")

    return GameSpec(
        id="euclid",
        config={"a": a, "b": b},
        initial=GameState(PlayerId.FIRST, normalize(a, b)),
        legal=legal,
        transition=transition,
        terminal=terminal,
        outcome=outcome,
        canonical=canonical,
    )
