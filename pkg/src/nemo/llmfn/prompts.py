"""State-to-prompt serializers and the move parser that closes the loop.

Each serializer renders a fixed sentence pattern; the canonical outputs are
frozen as golden files under tests/goldens and must never drift.
"""

from __future__ import annotations

import re

from ..core import GameError, GameSpec, GameState, PlayerId, legal_actions
from ..games.mancala import row_range, store_index
from ..games.tictactoe import EMPTY, MARKS


class NoLegalMove(GameError):
    """The response contained no token that is a legal action here."""


CELL_NAMES = (
    "Top-Left",
    "Top-Center",
    "Top-Right",
    "Middle-Left",
    "Center",
    "Middle-Right",
    "Bottom-Left",
    "Bottom-Center",
    "Bottom-Right",
)


def _seeds(count: int) -> str:
    return f"{count} seed" if count == 1 else f"{count} seeds"


def _stones(count: int) -> str:
    return f"{count} stone" if count == 1 else f"{count} stones"


def _number_list(numbers: list[int]) -> str:
    words = [str(n) for n in numbers]
    if len(words) == 1:
        return words[0]
    if len(words) == 2:
        return f"{words[0]} or {words[1]}"
    return ", ".join(words[:-1]) + f", or {words[-1]}"


def _tictactoe_prompt(state: GameState) -> str:
    cells = state.payload
    occupied = [
        f"Cell {i} ({CELL_NAMES[i]}) is occupied by '{cells[i]}'." for i in range(9) if cells[i] != EMPTY
    ]
    if not occupied:
        board = "All cells are empty."
    elif EMPTY in cells:
        board = " ".join(occupied) + " All remaining cells are empty."
    else:
        board = " ".join(occupied)
    mark = MARKS[state.to_move]
    return (
        f"Current Configuration: {board}\n"
        f"Objective: Analyze the board state and execute the optimal move for Player '{mark}' "
        "to prevent a loss or secure a win."
    )


def _nim_prompt(spec: GameSpec, state: GameState) -> str:
    r = state.payload
    takes = _number_list(list(range(1, min(spec.config["k"], r) + 1)))
    noun = "stone" if min(spec.config["k"], r) == 1 else "stones"
    return (
        f"Game Status: A single pile remains containing {_stones(r)}.\n"
        f"Constraints: You are permitted to remove {takes} {noun}. "
        "Taking the final stone results in a loss.\n"
        "Task: Apply the winning mathematical strategy (Nim-sum analysis) to calculate the precise "
        "number of stones to remove this turn. Provide a brief rationale for your decision."
    )


def _mancala_row(pits: tuple[int, ...], n: int, player: PlayerId) -> str:
    indices = list(row_range(n, player))
    last_filled = -1
    for pos, i in enumerate(indices):
        if pits[i] > 0:
            last_filled = pos
    listed = [f"Pit {i}: {_seeds(pits[i])}" for i in indices[: last_filled + 1]]
    store = pits[store_index(n, player)]
    if listed:
        return ", ".join(listed) + f". Store: {store}."
    return f"Store: {store}."


def _mancala_prompt(spec: GameSpec, state: GameState) -> str:
    n = spec.config["pits_per_side"]
    agent = state.to_move
    opponent = agent.opponent()
    labels = {PlayerId.FIRST: "Bottom Row", PlayerId.SECOND: "Top Row"}
    return (
        "State Representation:\n"
        f"Opponent ({labels[opponent]}): {_mancala_row(state.payload, n, opponent)}\n"
        f"Agent ({labels[agent]}): {_mancala_row(state.payload, n, agent)}\n"
        "Instruction: Utilize game-tree analysis to determine the move that yields the highest "
        "strategic advantage from this position."
    )


def serialize_state(spec: GameSpec, state: GameState) -> str:
    """Render the structured prompt text for a state of one of the three
    prompt-serialized games."""
    if spec.id == "tictactoe":
        return _tictactoe_prompt(state)
    if spec.id == "nim":
        return _nim_prompt(spec, state)
    if spec.id == "mancala":
        return _mancala_prompt(spec, state)
    raise GameError(f"no prompt serializer for game {spec.id!r}")


_TOKEN = re.compile(r"\b\d+\b")


def parse_move(spec: GameSpec, response: str, state: GameState) -> int:
    """First whole-word integer in the response that is legal here.

    Covers 'Pit N', 'Cell N', and bare stone counts alike; raises NoLegalMove
    when nothing legal can be extracted, which triggers retry or fallback.
    """
    legal = set(legal_actions(spec, state))
    for token in _TOKEN.findall(response):
        value = int(token)
        if value in legal:
            return value
    raise NoLegalMove(f"no legal action found in response: {response[:120]!r}")
