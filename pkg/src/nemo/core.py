"""Two-player alternating-turn game substrate.

Everything an agent or game plugs into lives here: player identity, game
states, game specs (initial state, legal moves, transition, terminal test,
outcome), the seeded match runner, and the replayable match record.

All value types are immutable after construction and safe to share across
threads; matches are independent given independent seeds.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Protocol, runtime_checkable

EPOCH_TIMESTAMP = "1970-01-01T00:00:00+00:00"


class GameError(Exception):
    """Base class for rule and contract violations."""


class IllegalAction(GameError):
    """An action outside legal_actions was applied; caller bug or unparsed move."""


class NotTerminal(GameError):
    """Outcome requested for a state that is still in play."""


class InvalidConfig(GameError):
    """Game parameters outside the legal range."""


class InvalidRecord(GameError):
    """A GameRecord that does not replay to its stated result."""


class AgentFault(GameError):
    """An agent produced an illegal action."""


class PlayerId(Enum):
    FIRST = "first"
    SECOND = "second"

    def opponent(self) -> "PlayerId":
        return PlayerId.SECOND if self is PlayerId.FIRST else PlayerId.FIRST


class Result(Enum):
    FIRST_WINS = "first_wins"
    SECOND_WINS = "second_wins"
    DRAW = "draw"


def win_for(player: PlayerId) -> Result:
    return Result.FIRST_WINS if player is PlayerId.FIRST else Result.SECOND_WINS


@dataclass(frozen=True)
class Outcome:
    result: Result

    @property
    def winner(self) -> PlayerId | None:
        if self.result is Result.FIRST_WINS:
            return PlayerId.FIRST
        if self.result is Result.SECOND_WINS:
            return PlayerId.SECOND
        return None

    def reward(self, player: PlayerId) -> int:
        """Zero-sum reward in {-1, 0, +1} for one seat."""
        if self.winner is None:
            return 0
        return 1 if self.winner is player else -1


@dataclass(frozen=True)
class GameState:
    """A position plus the player to move. ``payload`` is game-specific and hashable."""

    to_move: PlayerId
    payload: Any


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Contract for one configured game.

    ``legal`` returns a non-empty ascending action list exactly when the state
    is non-terminal.  ``transition`` is defined only for legal actions and
    flips ``to_move`` unless the game grants an extra turn.  ``outcome`` is
    defined only for terminal states.  ``canonical`` produces a stable,
    injective single-line key for any reachable state.
    """

    id: str
    config: dict[str, Any]
    initial: GameState
    legal: Callable[[GameState], list[int]]
    transition: Callable[[GameState, int], GameState]
    terminal: Callable[[GameState], bool]
    outcome: Callable[[GameState], Outcome]
    canonical: Callable[[GameState], str]


def format_key(letter: str, state: GameState, payload_text: str, mover_text: str | None = None) -> str:
    """Uniform canonical-key layout: ``<letter>:<mover>:<payload>``."""
    mover = mover_text if mover_text is not None else ("1" if state.to_move is PlayerId.FIRST else "2")
    return f"{letter}:{mover}:{payload_text}"


def legal_actions(spec: GameSpec, state: GameState) -> list[int]:
    """Deterministically ordered legal actions; empty exactly for terminal states."""
    if spec.terminal(state):
        return []
    actions = sorted(spec.legal(state))
    if not actions:
        raise GameError(f"{spec.id}: non-terminal state {spec.canonical(state)} has no legal action")
    return actions


def apply(spec: GameSpec, state: GameState, action: int) -> GameState:
    if action not in legal_actions(spec, state):
        raise IllegalAction(f"{spec.id}: action {action!r} illegal in {spec.canonical(state)}")
    return spec.transition(state, action)


def outcome_of(spec: GameSpec, state: GameState) -> Outcome:
    if not spec.terminal(state):
        raise NotTerminal(f"{spec.id}: {spec.canonical(state)} is still in play")
    return spec.outcome(state)


def canonical_key(spec: GameSpec, state: GameState) -> str:
    return spec.canonical(state)


@runtime_checkable
class Agent(Protocol):
    """Anything that picks a legal action for a non-terminal state.

    Agents may keep per-match state; ``play_match`` calls ``reset()`` when the
    agent provides one.  ``explain`` (optional) returns a short rationale for
    the agent's last or next move, used for chat-style display.
    """

    name: str

    def choose(self, state: GameState, rng: random.Random) -> int: ...


@dataclass(frozen=True)
class Move:
    player: PlayerId
    action: int
    state_key: str  # canonical key of the state the action was taken in


@dataclass(frozen=True)
class GameRecord:
    """A full transcript of one match, replayable from the initial state."""

    record_id: str
    spec_id: str
    config: dict[str, Any]
    moves: tuple[Move, ...]
    outcome: Outcome
    agents: dict[str, Any]
    created_at: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "record_id": self.record_id,
                "spec_id": self.spec_id,
                "config": self.config,
                "moves": [[m.player.value, m.action, m.state_key] for m in self.moves],
                "outcome": self.outcome.result.value,
                "agents": self.agents,
                "created_at": self.created_at,
            },
            separators=(",", ":"),
            sort_keys=True,
        )

    @staticmethod
    def from_json(line: str) -> "GameRecord":
        raw = json.loads(line)
        moves = tuple(Move(PlayerId(p), int(a), k) for p, a, k in raw["moves"])
        return GameRecord(
            record_id=raw["record_id"],
            spec_id=raw["spec_id"],
            config=raw["config"],
            moves=moves,
            outcome=Outcome(Result(raw["outcome"])),
            agents=raw["agents"],
            created_at=raw["created_at"],
        )


def _content_record_id(spec: GameSpec, seed: int, names: dict[str, str], moves: Iterable[Move], result: Result) -> str:
    blob = json.dumps(
        [spec.id, spec.config, seed, names, [[m.player.value, m.action, m.state_key] for m in moves], result.value],
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def play_match(
    spec: GameSpec,
    agent_first: Agent,
    agent_second: Agent,
    seed: int,
    record_id: str | None = None,
    created_at: str | None = None,
    max_plies: int = 100_000,
) -> GameRecord:
    """Run one seeded match to completion and return its replayable record.

    All randomness is drawn from a ``random.Random(seed)`` shared by both
    agents in turn order, so identical inputs give bit-identical records.  An
    agent returning an illegal action forfeits; the fault is flagged in the
    record's agent descriptor rather than raised.
    """
    rng = random.Random(seed)
    for agent in (agent_first, agent_second):
        reset = getattr(agent, "reset", None)
        if reset is not None:
            reset()

    seats = {PlayerId.FIRST: agent_first, PlayerId.SECOND: agent_second}
    agents_desc: dict[str, Any] = {
        "first": {"name": agent_first.name},
        "second": {"name": agent_second.name},
    }
    state = spec.initial
    moves: list[Move] = []
    outcome: Outcome | None = None
    for _ in range(max_plies):
        if spec.terminal(state):
            outcome = spec.outcome(state)
            break
        mover = state.to_move
        action = seats[mover].choose(state, rng)
        if action not in legal_actions(spec, state):
            agents_desc[mover.value]["fault"] = True
            agents_desc[mover.value]["fault_action"] = repr(action)
            outcome = Outcome(win_for(mover.opponent()))
            break
        moves.append(Move(mover, action, spec.canonical(state)))
        state = spec.transition(state, action)
    if outcome is None:
        raise GameError(f"{spec.id}: match exceeded {max_plies} plies")

    names = {"first": agent_first.name, "second": agent_second.name}
    if record_id is None:
        record_id = _content_record_id(spec, seed, names, moves, outcome.result)
    return GameRecord(
        record_id=record_id,
        spec_id=spec.id,
        config=dict(spec.config),
        moves=tuple(moves),
        outcome=outcome,
        agents=agents_desc,
        created_at=created_at if created_at is not None else EPOCH_TIMESTAMP,
    )


def verify_record(spec: GameSpec, record: GameRecord) -> None:
    """Replay a record through the spec; raise InvalidRecord on any mismatch."""
    if record.spec_id != spec.id:
        raise InvalidRecord(f"record is for {record.spec_id!r}, spec is {spec.id!r}")
    if record.config != spec.config:
        raise InvalidRecord(f"config mismatch: {record.config!r} != {spec.config!r}")
    state = spec.initial
    for i, move in enumerate(record.moves):
        if spec.terminal(state):
            raise InvalidRecord(f"move {i} played after the game ended")
        if move.player is not state.to_move:
            raise InvalidRecord(f"move {i}: recorded mover {move.player.value}, expected {state.to_move.value}")
        if move.state_key != spec.canonical(state):
            raise InvalidRecord(f"move {i}: state key {move.state_key!r} != {spec.canonical(state)!r}")
        if move.action not in legal_actions(spec, state):
            raise InvalidRecord(f"move {i}: action {move.action!r} illegal")
        state = spec.transition(state, move.action)

    faulted = [seat for seat in ("first", "second") if record.agents.get(seat, {}).get("fault")]
    if faulted:
        loser = PlayerId(faulted[0])
        if record.outcome.winner is not loser.opponent():
            raise InvalidRecord("forfeit record does not award the win to the non-faulting seat")
        return
    if not spec.terminal(state):
        raise InvalidRecord("record ends on a non-terminal state without a fault")
    if spec.outcome(state) != record.outcome:
        raise InvalidRecord(
            f"replayed outcome {spec.outcome(state).result.value} != recorded {record.outcome.result.value}"
        )


@dataclass
class FnAgent:
    """Wrap a plain ``(state, rng) -> action`` function as an agent."""

    name: str
    fn: Callable[[GameState, random.Random], int]

    def choose(self, state: GameState, rng: random.Random) -> int:
        return self.fn(state, rng)


@dataclass
class FirstLegalAgent:
    """Always plays the lowest-index legal action; the universal safe fallback."""

    spec: GameSpec
    name: str = "first-legal"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return legal_actions(self.spec, state)[0]


@dataclass
class RandomAgent:
    """Uniform random over legal actions, driven by the match rng."""

    spec: GameSpec
    name: str = "random"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return rng.choice(legal_actions(self.spec, state))
