"""Mancala under Kalah rules on a configurable board.

Default board: 14 slots — pits 0..5 are the first player's (bottom) row,
6 their store, 7..12 the second player's (top) row, 13 their store.  Sowing
runs counterclockwise (ascending index) and skips the opponent's store.  A
last seed in the mover's store grants an extra turn; a last seed in an empty
own pit opposite a non-empty pit captures both into the mover's store.  When
the player to move has an empty row the game ends and the opponent sweeps
their own remaining row into their store; the higher store wins.
"""

from __future__ import annotations

from ..core import GameSpec, GameState, InvalidConfig, Outcome, PlayerId, Result, format_key, win_for


def row_range(n: int, player: PlayerId) -> range:
    return range(0, n) if player is PlayerId.FIRST else range(n + 1, 2 * n + 1)


def store_index(n: int, player: PlayerId) -> int:
    return n if player is PlayerId.FIRST else 2 * n + 1


def opposite(n: int, pit: int) -> int:
    return 2 * n - pit


def mancala_spec(pits_per_side: int = 6, seeds_per_pit: int = 4) -> GameSpec:
    if pits_per_side < 1 or seeds_per_pit < 1:
        raise InvalidConfig(
            f"pits_per_side and seeds_per_pit must be >= 1, got {pits_per_side}, {seeds_per_pit}"
        )
    n = pits_per_side
    size = 2 * n + 2

    def legal(state: GameState) -> list[int]:
        pits = state.payload
        return [i for i in row_range(n, state.to_move) if pits[i] > 0]

    def terminal(state: GameState) -> bool:
        pits = state.payload
        return all(pits[i] == 0 for i in row_range(n, state.to_move))

    def transition(state: GameState, action: int) -> GameState:
        mover = state.to_move
        pits = list(state.payload)
        own_store = store_index(n, mover)
        skip = store_index(n, mover.opponent())
        seeds = pits[action]
        pits[action] = 0
        idx = action
        while seeds > 0:
            idx = (idx + 1) % size
            if idx == skip:
                continue
            pits[idx] += 1
            seeds -= 1
        if idx in row_range(n, mover) and pits[idx] == 1 and pits[opposite(n, idx)] > 0:
            pits[own_store] += pits[idx] + pits[opposite(n, idx)]
            pits[idx] = 0
            pits[opposite(n, idx)] = 0
        next_player = mover if idx == own_store else mover.opponent()
        return GameState(next_player, tuple(pits))

    def outcome(state: GameState) -> Outcome:
        # The stalled mover keeps only their store; the opponent sweeps their row.
        pits = state.payload
        totals = {}
        for player in PlayerId:
            swept = 0 if player is state.to_move else sum(pits[i] for i in row_range(n, player))
            totals[player] = pits[store_index(n, player)] + swept
        if totals[PlayerId.FIRST] > totals[PlayerId.SECOND]:
            return Outcome(win_for(PlayerId.FIRST))
        if totals[PlayerId.SECOND] > totals[PlayerId.FIRST]:
            return Outcome(win_for(PlayerId.SECOND))
        return Outcome(Result.DRAW)

    def canonical(state: GameState) -> str:
        return format_key("M", state, ",".join(str(c) for c in state.payload))

    pits0 = [seeds_per_pit] * size
    pits0[store_index(n, PlayerId.FIRST)] = 0
    pits0[store_index(n, PlayerId.SECOND)] = 0

    return GameSpec(
        id="mancala",
        config={"pits_per_side": pits_per_side, "seeds_per_pit": seeds_per_pit},
        initial=GameState(PlayerId.FIRST, tuple(pits0)),
        legal=legal,
        transition=transition,
        terminal=terminal,
        outcome=outcome,
        canonical=canonical,
    )


def final_totals(spec: GameSpec, state: GameState) -> dict[PlayerId, int]:
    """Store totals after the end-of-game sweep; defined for terminal states."""
    n = spec.config["pits_per_side"]
    pits = state.payload
    totals = {}
    for player in PlayerId:
        swept = 0 if player is state.to_move else sum(pits[i] for i in row_range(n, player))
        totals[player] = pits[store_index(n, player)] + swept
    return totals
