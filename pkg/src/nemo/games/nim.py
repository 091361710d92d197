"""Single-pile misere Nim: take 1..K stones per turn; whoever takes the last stone loses."""

from __future__ import annotations

from ..core import GameSpec, GameState, InvalidConfig, Outcome, PlayerId, format_key, win_for


def nim_spec(n: int, k: int) -> GameSpec:
    """Pile of ``n`` stones, at most ``k`` removed per move, misere play."""
    if n < 1 or k < 1:
        raise InvalidConfig(f"nim requires n >= 1 and k >= 1, got n={n}, k={k}")

    def legal(state: GameState) -> list[int]:
        r = state.payload
        return list(range(1, min(k, r) + 1))

    def transition(state: GameState, action: int) -> GameState:
        return GameState(state.to_move.opponent(), state.payload - action)

    def terminal(state: GameState) -> bool:
        return state.payload == 0

    def outcome(state: GameState) -> Outcome:
        # The mover who emptied the pile loses; the player now to move wins.
        return Outcome(win_for(state.to_move))

    def canonical(state: GameState) -> str:
        return format_key("N", state, f"{state.payload}/{k}")

    return GameSpec(
        id="nim",
        config={"n": n, "k": k},
        initial=GameState(PlayerId.FIRST, n),
        legal=legal,
        transition=transition,
        terminal=terminal,
        outcome=outcome,
        canonical=canonical,
    )
