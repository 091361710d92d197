"""Live game sessions: in-memory state, serialized per-session moves, agent
replies, and rating/persistence side effects when a game finishes."""

from __future__ import annotations

import datetime as _dt
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from ..agents import build_agent
from ..core import (
    Agent,
    GameError,
    GameRecord,
    GameSpec,
    GameState,
    InvalidConfig,
    InvalidRecord,
    Move,
    Outcome,
    PlayerId,
    legal_actions,
    verify_record,
    win_for,
)
from ..games import config_object, describe_state, make_spec
from ..llmfn import LlmBackend, MemoCache
from .elo import Leaderboard
from .store import RecordStore, SyncQueue

SESSION_TIMEOUT_SECONDS = 3600.0


class SessionNotFound(GameError):
    pass


class NotYourTurn(GameError):
    pass


class IllegalMove(GameError):
    pass


def _now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class Session:
    session_id: str
    spec: GameSpec
    agent: Agent
    agent_descriptor: str
    participant: str
    human_seat: PlayerId
    state: GameState
    rng: random.Random
    status: str = "active"  # active | finished | abandoned
    moves: list[Move] = field(default_factory=list)
    outcome: Outcome | None = None
    rating_delta: float | None = None
    agent_faulted: bool = False
    last_active: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class GameService:
    """Everything the HTTP layer exposes, usable directly in-process."""

    def __init__(
        self,
        store: RecordStore,
        llm_backend: LlmBackend | None = None,
        llm_cache: MemoCache | None = None,
        session_timeout: float = SESSION_TIMEOUT_SECONDS,
        leaderboard_path: str | None = None,
    ) -> None:
        self.store = store
        self.queue = SyncQueue(store)
        self.leaderboard = Leaderboard()
        self.leaderboard_path = leaderboard_path
        if leaderboard_path:
            self.leaderboard.restore(leaderboard_path)
        self.llm_backend = llm_backend
        self.llm_cache = llm_cache if llm_cache is not None else MemoCache()
        self.session_timeout = session_timeout
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._rated_ids: set[str] = set()
        self._clock = time.monotonic

    # -- sessions ---------------------------------------------------------

    def create_session(
        self,
        game: str,
        params: dict[str, Any] | None,
        agent_descriptor: str,
        participant: str = "anonymous",
        human_seat: str = "first",
        seed: int | None = None,
    ) -> dict[str, Any]:
        spec = make_spec(game, params)
        if human_seat not in ("first", "second"):
            raise InvalidConfig(f"human_seat must be 'first' or 'second', got {human_seat!r}")
        agent = build_agent(spec, agent_descriptor, llm_backend=self.llm_backend, llm_cache=self.llm_cache)
        session = Session(
            session_id=uuid.uuid4().hex,
            spec=spec,
            agent=agent,
            agent_descriptor=agent_descriptor,
            participant=participant,
            human_seat=PlayerId(human_seat),
            state=spec.initial,
            rng=random.Random(seed if seed is not None else random.SystemRandom().getrandbits(48)),
            last_active=self._clock(),
        )
        with self._lock:
            self._sessions[session.session_id] = session
        reply: dict[str, Any] = {"session_id": session.session_id}
        agent_moves, reasoning = self._advance_agent(session)
        reply.update(self._view(session))
        if agent_moves:
            reply["agent_moves"] = agent_moves
            if reasoning:
                reply["reasoning"] = reasoning
        return reply

    def _get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionNotFound(f"no session {session_id!r}")
        if session.status == "active" and self._clock() - session.last_active > self.session_timeout:
            session.status = "abandoned"
        return session

    def view(self, session_id: str) -> dict[str, Any]:
        return self._view(self._get(session_id))

    def _view(self, session: Session) -> dict[str, Any]:
        spec = session.spec
        state = session.state
        view = {
            "game": spec.id,
            "config": config_object(spec),
            "state": describe_state(spec, state),
            "legal_actions": legal_actions(spec, state),
            "to_move": state.to_move.value,
            "human_seat": session.human_seat.value,
            "participant": session.participant,
            "agent": session.agent_descriptor,
            "status": session.status,
        }
        if session.outcome is not None:
            winner = session.outcome.winner
            view["outcome"] = {
                "result": session.outcome.result.value,
                "winner": winner.value if winner else None,
                "human_reward": session.outcome.reward(session.human_seat),
            }
            if session.rating_delta is not None:
                view["rating_delta"] = round(session.rating_delta, 2)
        return view

    def submit_move(self, session_id: str, action: Any) -> dict[str, Any]:
        session = self._get(session_id)
        with session.lock:
            if session.status != "active":
                raise NotYourTurn(f"session is {session.status}")
            spec = session.spec
            if session.state.to_move is not session.human_seat:
                raise NotYourTurn("it is not your turn")
            try:
                action = int(action)
            except (TypeError, ValueError):
                raise IllegalMove(f"action must be an integer, got {action!r}") from None
            if action not in legal_actions(spec, session.state):
                raise IllegalMove(f"action {action} is not legal here")
            session.moves.append(Move(session.human_seat, action, spec.canonical(session.state)))
            session.state = spec.transition(session.state, action)
            agent_moves, reasoning = self._advance_agent(session)
            session.last_active = self._clock()
            reply = self._view(session)
            reply["agent_moves"] = agent_moves
            if reasoning:
                reply["reasoning"] = reasoning
            return reply

    def _advance_agent(self, session: Session) -> tuple[list[int], str | None]:
        """Let the agent reply until it is the human's turn or the game ends."""
        spec = session.spec
        agent_seat = session.human_seat.opponent()
        agent_moves: list[int] = []
        reasons: list[str] = []
        while not spec.terminal(session.state) and session.state.to_move is agent_seat:
            action = session.agent.choose(session.state, session.rng)
            if action not in legal_actions(spec, session.state):
                # A faulting agent forfeits, same contract as play_match.
                session.outcome = Outcome(win_for(session.human_seat))
                session.status = "finished"
                session.agent_faulted = True
                self._finish(session)
                return agent_moves, "; ".join(reasons) or None
            explain = getattr(session.agent, "explain", None)
            if explain is not None:
                try:
                    reasons.append(str(explain(session.state)))
                except Exception:
                    pass
            session.moves.append(Move(agent_seat, action, spec.canonical(session.state)))
            session.state = spec.transition(session.state, action)
            agent_moves.append(action)
        if spec.terminal(session.state):
            session.outcome = spec.outcome(session.state)
            session.status = "finished"
            self._finish(session)
        return agent_moves, "; ".join(reasons) or None

    def _finish(self, session: Session) -> None:
        assert session.outcome is not None
        human, agent = session.human_seat, session.human_seat.opponent()
        descriptors: dict[str, Any] = {
            session.human_seat.value: {"name": f"human:{session.participant}"},
            agent.value: {"name": session.agent_descriptor},
        }
        if session.agent_faulted:
            descriptors[agent.value]["fault"] = True
        record = GameRecord(
            record_id=uuid.uuid4().hex,
            spec_id=session.spec.id,
            config=dict(session.spec.config),
            moves=tuple(session.moves),
            outcome=session.outcome,
            agents=descriptors,
            created_at=_now_iso(),
        )
        session.rating_delta = self._rate_and_enqueue(record, session.spec)

    # -- records and ratings ----------------------------------------------

    def record_result(self, record: GameRecord, spec: GameSpec | None = None) -> float | None:
        """Validate an externally submitted record, rate it, and queue it."""
        if spec is None:
            spec = make_spec(record.spec_id, record.config)
        try:
            verify_record(spec, record)
        except InvalidRecord:
            raise
        except GameError as exc:
            raise InvalidRecord(str(exc)) from exc
        return self._rate_and_enqueue(record, spec)

    def _rate_and_enqueue(self, record: GameRecord, spec: GameSpec) -> float | None:
        """Ratings update synchronously exactly once per record; persistence
        is the asynchronous part."""
        delta: float | None = None
        with self._lock:
            fresh = record.record_id not in self._rated_ids and not self.store.has(record.record_id)
            if fresh:
                self._rated_ids.add(record.record_id)
        if fresh:
            delta = self._apply_rating(record)
        self.queue.enqueue(record)
        return delta

    def _apply_rating(self, record: GameRecord) -> float | None:
        seats = {}
        for seat in (PlayerId.FIRST, PlayerId.SECOND):
            seats[seat] = str(record.agents.get(seat.value, {}).get("name", ""))
        human_seat = next((s for s, name in seats.items() if name.startswith("human:")), None)
        if human_seat is None:
            return None
        participant = seats[human_seat].split(":", 1)[1] or "anonymous"
        agent_name = seats[human_seat.opponent()]
        reward = record.outcome.reward(human_seat)
        score = {1: 1.0, 0: 0.5, -1: 0.0}[reward]
        return self.leaderboard.record(participant, agent_name, score)

    def leaderboard_entries(self, limit: int | None = None) -> list[dict[str, Any]]:
        return [entry.as_dict() for entry in self.leaderboard.top(limit)]

    def flush(self) -> int:
        """Drain pending records and rewrite the leaderboard snapshot."""
        persisted = self.queue.flush()
        if self.leaderboard_path:
            self.leaderboard.snapshot(self.leaderboard_path)
        return persisted

    def audit_store(self) -> int:
        """Replay-verify every persisted record; returns the count checked."""
        count = 0
        for record in self.store.all_records():
            verify_record(make_spec(record.spec_id, record.config), record)
            count += 1
        return count
