"""Tic-tac-toe on a 3x3 board, cells indexed 0..8 row-major. X moves first."""

from __future__ import annotations

from ..core import GameSpec, GameState, IllegalAction, Outcome, PlayerId, Result, format_key, win_for

EMPTY = "."
LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6))

# X is the first player's mark throughout.
MARKS = {PlayerId.FIRST: "X", PlayerId.SECOND: "O"}


def winner(cells: str) -> str | None:
    for a, b, c in LINES:
        if cells[a] != EMPTY and cells[a] == cells[b] == cells[c]:
            return cells[a]
    return None


def _legal(state: GameState) -> list[int]:
    cells = state.payload
    return [i for i in range(9) if cells[i] == EMPTY]


def _terminal(state: GameState) -> bool:
    cells = state.payload
    return winner(cells) is not None or EMPTY not in cells


def _transition(state: GameState, action: int) -> GameState:
    cells = state.payload
    if cells[action] != EMPTY:
        raise IllegalAction(f"cell {action} is occupied")
    mark = MARKS[state.to_move]
    return GameState(state.to_move.opponent(), cells[:action] + mark + cells[action + 1 :])


def _outcome(state: GameState) -> Outcome:
    mark = winner(state.payload)
    if mark == "X":
        return Outcome(win_for(PlayerId.FIRST))
    if mark == "O":
        return Outcome(win_for(PlayerId.SECOND))
    return Outcome(Result.DRAW)


def _canonical(state: GameState) -> str:
    return format_key("T", state, state.payload, mover_text=MARKS[state.to_move])


def tictactoe_spec() -> GameSpec:
    return GameSpec(
        id="tictactoe",
        config={},
        initial=GameState(PlayerId.FIRST, EMPTY * 9),
        legal=_legal,
        transition=_transition,
        terminal=_terminal,
        outcome=_outcome,
        canonical=_canonical,
    )
