"""Exact play: the brute-force position solver, dictionary tables built from
it, and the closed-form move rules for Nim and the two-pile subtraction game.

``solve_positions`` is the reference oracle the rest of the project tests
against: a memoized exhaustive search with no heuristics, valid for any
acyclic spec with an enumerable state space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    Agent,
    GameError,
    GameSpec,
    GameState,
    legal_actions,
)

DEFAULT_MAX_STATES = 10_000_000


class StateSpaceTooLarge(GameError):
    """Enumeration blew the state cap; the game belongs with the heuristic agents."""


class UnknownState(GameError):
    """Dictionary lookup for a state outside the table's spec or reach."""


@dataclass
class SolvedPositions:
    """Exact values for every state reachable from the initial position.

    ``values`` maps canonical key -> game value in {-1, 0, +1} from the
    perspective of the player to move; ``depth_to_end`` counts plies to the
    end of the game along the lowest-index optimal line; ``best_action`` is
    None for terminal states.
    """

    spec: GameSpec
    values: dict[str, int]
    depth_to_end: dict[str, int]
    best_action: dict[str, int | None]
    states: dict[str, GameState]

    @property
    def state_count(self) -> int:
        return len(self.values)

    def value_of(self, state: GameState) -> int:
        return self.values[self.spec.canonical(state)]

    def action_value(self, state: GameState, action: int) -> int:
        """Value of taking ``action`` in ``state``, from the mover's perspective."""
        child = self.spec.transition(state, action)
        v = self.values[self.spec.canonical(child)]
        return v if child.to_move is state.to_move else -v

    def optimal_actions(self, state: GameState) -> list[int]:
        best = self.values[self.spec.canonical(state)]
        return [a for a in legal_actions(self.spec, state) if self.action_value(state, a) == best]

    def non_terminal_keys(self) -> list[str]:
        return [k for k, a in self.best_action.items() if a is not None]


@dataclass
class _Frame:
    state: GameState
    key: str
    actions: list[int]
    cursor: int = 0
    children: list[tuple[str, bool]] = field(default_factory=list)  # (child key, same mover)


def solve_positions(spec: GameSpec, max_states: int = DEFAULT_MAX_STATES) -> SolvedPositions:
    """Memoized exhaustive minimax over every reachable state.

    Extra-turn moves (same mover after the transition) keep the child's sign;
    normal moves negate it.  Raises StateSpaceTooLarge past ``max_states``
    opened states.
    """
    values: dict[str, int] = {}
    depths: dict[str, int] = {}
    best: dict[str, int | None] = {}
    states: dict[str, GameState] = {}
    open_keys: set[str] = set()

    def open_frame(state: GameState) -> _Frame:
        key = spec.canonical(state)
        if len(open_keys) + len(values) >= max_states:
            raise StateSpaceTooLarge(f"{spec.id}: more than {max_states} states")
        open_keys.add(key)
        return _Frame(state, key, legal_actions(spec, state))

    stack = [open_frame(spec.initial)]
    while stack:
        frame = stack[-1]
        if not frame.actions:  # terminal
            values[frame.key] = spec.outcome(frame.state).reward(frame.state.to_move)
            depths[frame.key] = 0
            best[frame.key] = None
            states[frame.key] = frame.state
            open_keys.discard(frame.key)
            stack.pop()
            continue
        if frame.cursor < len(frame.actions):
            child = spec.transition(frame.state, frame.actions[frame.cursor])
            ckey = spec.canonical(child)
            frame.children.append((ckey, child.to_move is frame.state.to_move))
            frame.cursor += 1
            if ckey not in values:
                if ckey in open_keys:
                    raise GameError(f"{spec.id}: cycle through {ckey}")
                stack.append(open_frame(child))
            continue
        best_value = -2
        best_idx: int | None = None
        for i, (ckey, same_mover) in enumerate(frame.children):
            v = values[ckey] if same_mover else -values[ckey]
            if v > best_value:
                best_value = v
                best_idx = i
        assert best_idx is not None
        values[frame.key] = best_value
        depths[frame.key] = 1 + depths[frame.children[best_idx][0]]
        best[frame.key] = frame.actions[best_idx]
        states[frame.key] = frame.state
        open_keys.discard(frame.key)
        stack.pop()

    return SolvedPositions(spec, values, depths, best, states)


@dataclass
class DictionaryTable:
    """Precomputed best move and value for every reachable non-terminal state."""

    spec: GameSpec
    entries: dict[str, tuple[int, int]]  # key -> (best_action, game_value)


def build_dictionary(spec: GameSpec, max_states: int = DEFAULT_MAX_STATES) -> DictionaryTable:
    solved = solve_positions(spec, max_states=max_states)
    entries = {
        key: (action, solved.values[key])
        for key, action in solved.best_action.items()
        if action is not None
    }
    return DictionaryTable(spec, entries)


def dictionary_move(table: DictionaryTable, state: GameState) -> int:
    key = table.spec.canonical(state)
    try:
        return table.entries[key][0]
    except KeyError:
        raise UnknownState(f"{table.spec.id}: no entry for {key}") from None


def export_dictionary(table: DictionaryTable, path: str | Path) -> None:
    """Write ``key<TAB>action<TAB>value`` lines sorted by key."""
    lines = [f"{key}\t{action}\t{value}" for key, (action, value) in sorted(table.entries.items())]
    Path(path).write_text("\n".join(lines) + "\n")


def import_dictionary(spec: GameSpec, path: str | Path) -> DictionaryTable:
    entries: dict[str, tuple[int, int]] = {}
    for line in Path(path).read_text().splitlines():
        if not line:
            continue
        key, action, value = line.split("\t")
        entries[key] = (int(action), int(value))
    return DictionaryTable(spec, entries)


# --- closed-form rules -------------------------------------------------------


def nim_sum(piles: list[int]) -> int:
    """Bitwise XOR fold of pile sizes (normal-play multi-pile Nim)."""
    total = 0
    for pile in piles:
        total ^= pile
    return total


def nim_optimal_move(r: int, k: int) -> int:
    """Optimal take for single-pile misere play with ``r`` stones left, max ``k``.

    Losing residues are r = 1 (mod k+1); from anywhere else, taking
    (r - 1) mod (k+1) puts the opponent on one.  From a losing residue the
    move cannot matter, so take 1 to keep the game long.
    """
    if r < 1 or k < 1:
        raise ValueError(f"need r >= 1 and k >= 1, got r={r}, k={k}")
    t = (r - 1) % (k + 1)
    return t if t != 0 else 1


def nim_is_winning(r: int, k: int) -> bool:
    return r % (k + 1) != 1


def euclid_winning(a: int, b: int, _memo: dict[tuple[int, int], bool] | None = None) -> bool:
    """True when the player to move at piles (a, b) wins with perfect play."""
    if a < b:
        a, b = b, a
    if b < 1:
        raise ValueError(f"piles must be >= 1, got ({a}, {b})")
    memo = _memo if _memo is not None else {}
    stack = [(a, b)]
    while stack:
        big, small = stack[-1]
        if (big, small) in memo:
            stack.pop()
            continue
        if big % small == 0:
            memo[(big, small)] = True  #, reach zero directly
            stack.pop()
            continue
        pending = []
        result = None
        for m in range(1, big // small + 1):
            child = (max(big - m * small, small), min(big - m * small, small))
            known = memo.get(child)
            if known is False:
                result = True
                break
            if known is None:
                pending.append(child)
        if result is not None:
            memo[(big, small)] = result
            stack.pop()
        elif pending:
            stack.extend(pending)
        else:
            memo[(big, small)] = False
            stack.pop()
    return memo[(a, b)]


def euclid_optimal_move(a: int, b: int) -> int | None:
    """Smallest multiplier whose successor is lost for the opponent, else None.

    None marks a losing position; agents then play m=1 to prolong the game.
    """
    if a < b:
        a, b = b, a
    memo: dict[tuple[int, int], bool] = {}
    for m in range(1, a // b + 1):
        rest = a - m * b
        if rest == 0 or not euclid_winning(max(rest, b), min(rest, b), memo):
            return m
    return None


def starter_nim_take(r: int, k: int, last_opponent_take: int) -> int:
    """The naive course-starter rule ``max(r, 3 - n_user)``, clamped to legality.

    Written as stated (the max can exceed the take limit), with the clamp
    keeping it playable; training loops use it as a deliberately weak H0.
    """
    raw = max(r, 3 - last_opponent_take)
    return max(1, min(raw, min(k, r)))


@dataclass
class StarterNimAgent:
    """The course-starter heuristic as a playable agent.

    Recovers the opponent's last take by watching the pile shrink between its
    own turns; 0 on the opening move.  play_match resets it between games.
    """

    k: int
    name: str = "nim-starter"
    _pile_after_my_move: int | None = None

    def reset(self) -> None:
        self._pile_after_my_move = None

    def choose(self, state: GameState, rng: random.Random) -> int:
        r = state.payload
        if self._pile_after_my_move is None or self._pile_after_my_move < r:
            last_take = 0  # first move of a game
        else:
            last_take = self._pile_after_my_move - r
        take = starter_nim_take(r, self.k, last_take)
        self._pile_after_my_move = r - take
        return take


# --- agents -------------------------------------------------------------------


@dataclass
class DictionaryAgent:
    table: DictionaryTable
    name: str = "dictionary"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return dictionary_move(self.table, state)

    def explain(self, state: GameState) -> str:
        key = self.table.spec.canonical(state)
        action, value = self.table.entries[key]
        verdict = {1: "a won position", 0: "a drawn position", -1: "a lost position"}[value]
        return f"Table lookup: best stored move is {action}; this is {verdict} for me."


@dataclass
class NimFormulaAgent:
    k: int
    name: str = "exact"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return nim_optimal_move(state.payload, self.k)

    def explain(self, state: GameState) -> str:
        r = state.payload
        take = nim_optimal_move(r, self.k)
        if nim_is_winning(r, self.k):
            return (
                f"{r} stones is {r % (self.k + 1)} mod {self.k + 1}; taking {take} "
                f"leaves {r - take}, which is 1 mod {self.k + 1} — a losing count for you."
            )
        return f"{r} stones is already 1 mod {self.k + 1}; I take {take} and wait for a mistake."


@dataclass
class EuclidFormulaAgent:
    name: str = "exact"

    def choose(self, state: GameState, rng: random.Random) -> int:
        big, small = state.payload
        move = euclid_optimal_move(big, small)
        return move if move is not None else 1

    def explain(self, state: GameState) -> str:
        big, small = state.payload
        move = euclid_optimal_move(big, small)
        if move is None:
            return f"({big}, {small}) is a lost position; I remove 1 x {small} and play on."
        return f"Removing {move} x {small} from {big} leaves the opponent on a losing position."


@dataclass
class OptimalAgent:
    """Plays the solver's lowest-index optimal action; usable on any enumerable game."""

    solved: SolvedPositions
    name: str = "optimal"

    def choose(self, state: GameState, rng: random.Random) -> int:
        action = self.solved.best_action[self.solved.spec.canonical(state)]
        assert action is not None
        return action


@dataclass
class SamplingOptimalAgent:
    """Optimal play with uniform random tie-breaking among value-equal moves.

    At lost positions every move ties, so this opponent spreads play across
    the whole losing fan — exactly the exposure a trial-and-error learner
    needs to see every winnable reply.
    """

    solved: SolvedPositions
    name: str = "optimal-sampling"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return rng.choice(self.solved.optimal_actions(state))


def exact_agent(spec: GameSpec, max_states: int = DEFAULT_MAX_STATES) -> Agent:
    """The strongest closed-form/deterministic agent available for a spec."""
    if spec.id == "nim":
        return NimFormulaAgent(spec.config["k"])
    if spec.id == "euclid":
        return EuclidFormulaAgent()
    return OptimalAgent(solve_positions(spec, max_states=max_states), name="exact")
