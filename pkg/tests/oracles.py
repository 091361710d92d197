"""Independent brute-force oracles used to freeze expected values.

Everything here is deliberately written from scratch against the rules as
stated, without importing the package's solvers, so the two code paths can
check each other.
"""

from __future__ import annotations

from functools import lru_cache

# --- tic-tac-toe over plain 9-char strings -----------------------------------

_LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6))


def ttt_winner(cells: str) -> str | None:
    for a, b, c in _LINES:
        if cells[a] != "." and cells[a] == cells[b] == cells[c]:
            return cells[a]
    return None


def ttt_counts() -> tuple[int, int, int, int]:
    """(reachable boards, non-terminal, terminal, complete games)."""
    seen: set[str] = set()
    games = 0
    stack = ["." * 9]
    seen.add(stack[0])
    non_terminal = 0
    terminal = 0
    # distinct games counted by walking move sequences, separate from the set walk
    def count_games(cells: str, mover: str) -> int:
        if ttt_winner(cells) or "." not in cells:
            return 1
        total = 0
        for i in range(9):
            if cells[i] == ".":
                total += count_games(cells[:i] + mover + cells[i + 1 :], "O" if mover == "X" else "X")
        return total

    while stack:
        cells = stack.pop()
        if ttt_winner(cells) or "." not in cells:
            terminal += 1
            continue
        non_terminal += 1
        mover = "X" if cells.count("X") == cells.count("O") else "O"
        for i in range(9):
            if cells[i] == ".":
                child = cells[:i] + mover + cells[i + 1 :]
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
    games = count_games("." * 9, "X")
    return len(seen), non_terminal, terminal, games


@lru_cache(maxsize=None)
def ttt_value(cells: str) -> int:
    """Game value for the player to move (+1 win, 0 draw, -1 loss)."""
    won = ttt_winner(cells)
    if won is not None:
        return -1  # the mover faces an already-won board: the previous mover won
    if "." not in cells:
        return 0
    mover = "X" if cells.count("X") == cells.count("O") else "O"
    best = -2
    for i in range(9):
        if cells[i] == ".":
            best = max(best, -ttt_value(cells[:i] + mover + cells[i + 1 :]))
    return best


# --- single-pile misere nim ---------------------------------------------------


def nim_win_table(n_max: int, k: int) -> list[bool]:
    """win[r] is True when the player to move at r stones wins; win[0] unused."""
    win = [False] * (n_max + 1)
    for r in range(1, n_max + 1):
        # taking the last stone loses, so only takes t < r can help
        win[r] = any(not win[r - t] for t in range(1, min(k, r - 1) + 1))
    return win


# --- the two-pile multiple-removal game ---------------------------------------


def euclid_win_table(limit: int) -> dict[tuple[int, int], bool]:
    """win[(a, b)] for 1 <= b <= a <= limit, player to move, bottom-up by a+b."""
    win: dict[tuple[int, int], bool] = {}
    for total in range(2, 2 * limit + 1):
        for b in range(1, limit + 1):
            a = total - b
            if a < b or a > limit:
                continue
            if a % b == 0:
                win[(a, b)] = True
                continue
            result = False
            for m in range(1, a // b + 1):
                rest = a - m * b
                child = (max(rest, b), min(rest, b))
                if not win[child]:
                    result = True
                    break
            win[(a, b)] = result
    return win


# --- Elo ------------------------------------------------------------------------


def elo_delta(rating: float, opponent: float, score: float, k_factor: float = 32.0) -> float:
    expected = 1.0 / (1.0 + 10.0 ** ((opponent - rating) / 400.0))
    return k_factor * (score - expected)
