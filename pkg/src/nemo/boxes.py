"""Trial-and-error learning with one weighted action box per visited state.

Moves are sampled in proportion to their box weights; after each game every
(state, action) pair the learner played is nudged up on a win and down on a
loss, clamped at a positive floor so no move ever becomes impossible.  A run
is considered mastered once the greedy policy provably achieves the game
value from every winning start and the learner has a clean recent window of
winning-start games.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .core import (
    Agent,
    GameError,
    GameRecord,
    GameSpec,
    GameState,
    Outcome,
    PlayerId,
    legal_actions,
    play_match,
)
from .exact import SolvedPositions, solve_positions


class ConfigMismatch(GameError):
    """A record stream from a different game or configuration."""


@dataclass(frozen=True)
class BoxParams:
    initial_weight: float = 1.0
    win_delta: float = 1.0
    loss_delta: float = -0.5
    floor: float = 0.05
    mastery_window: int = 20

    def __post_init__(self) -> None:
        if not (self.initial_weight > self.floor > 0):
            raise ValueError("need initial_weight > floor > 0")
        if not (self.win_delta > 0 > self.loss_delta):
            raise ValueError("need win_delta > 0 > loss_delta")


@dataclass
class BoxTable:
    spec: GameSpec
    params: BoxParams
    boxes: dict[str, list[tuple[int, float]]] = field(default_factory=dict)

    def box_for(self, state: GameState) -> list[tuple[int, float]]:
        """The (action, weight) list for a state, created uniform on first visit."""
        key = self.spec.canonical(state)
        box = self.boxes.get(key)
        if box is None:
            box = [(a, self.params.initial_weight) for a in legal_actions(self.spec, state)]
            self.boxes[key] = box
        return box

    def probabilities(self, state: GameState) -> list[tuple[int, float]]:
        box = self.box_for(state)
        total = sum(w for _, w in box)
        return [(a, w / total) for a, w in box]

    def argmax_action(self, key: str) -> int | None:
        box = self.boxes.get(key)
        if not box:
            return None
        return max(box, key=lambda aw: aw[1])[0] if len(box) > 1 else box[0][0]


def init_boxes(spec: GameSpec, params: BoxParams | None = None) -> BoxTable:
    return BoxTable(spec, params or BoxParams())


def select_action(table: BoxTable, state: GameState, rng: random.Random) -> int:
    """Sample an action with probability weight / sum(weights)."""
    box = table.box_for(state)
    total = sum(w for _, w in box)
    x = rng.random() * total
    acc = 0.0
    for action, weight in box:
        acc += weight
        if x < acc:
            return action
    return box[-1][0]


def reinforce(
    table: BoxTable,
    trajectory: Iterable[tuple[str, int]],
    outcome: Outcome,
    learner: PlayerId,
) -> BoxTable:
    """Shift every visited (state, action) weight by the game result; draws are neutral."""
    reward = outcome.reward(learner)
    if reward == 0:
        return table
    params = table.params
    delta = params.win_delta if reward > 0 else params.loss_delta
    for key, action in trajectory:
        box = table.boxes.get(key)
        if box is None:
            continue
        for i, (a, w) in enumerate(box):
            if a == action:
                box[i] = (a, max(params.floor, w + delta))
                break
    return table


@dataclass
class BoxAgent:
    table: BoxTable
    name: str = "boxes"

    def choose(self, state: GameState, rng: random.Random) -> int:
        return select_action(self.table, state, rng)

    def explain(self, state: GameState) -> str:
        probs = self.table.probabilities(state)
        top = ", ".join(f"{a}: {p:.0%}" for a, p in sorted(probs, key=lambda ap: -ap[1])[:3])
        return f"Sampling from learned weights (top picks {top})."


@dataclass
class GreedyBoxAgent:
    """The learned policy frozen to its argmax; unvisited states fall back to
    the lowest legal action."""

    table: BoxTable
    name: str = "boxes-greedy"

    def choose(self, state: GameState, rng: random.Random) -> int:
        action = self.table.argmax_action(self.table.spec.canonical(state))
        if action is None:
            return legal_actions(self.table.spec, state)[0]
        return action


@dataclass
class RoundLog:
    round: int
    learner_seat: PlayerId
    winning_start: bool
    won: bool
    states_visited: int


@dataclass
class TrainingRun:
    rounds_played: int
    mastered: bool
    history: list[RoundLog]
    seed: int
    table: BoxTable
    params: BoxParams


def round_seed(seed: int, round_index: int) -> int:
    """Stable per-round seed derivation, independent of hash randomization."""
    x = (seed * 0x9E3779B97F4A7C15 + round_index * 0xBF58476D1CE4E5B9) & (2**63 - 1)
    return x ^ (x >> 31)


def learner_seat_for(round_index: int) -> PlayerId:
    """Learner alternates seats; odd rounds as first player."""
    return PlayerId.FIRST if round_index % 2 == 1 else PlayerId.SECOND


def is_winning_start(solved: SolvedPositions, learner: PlayerId) -> bool:
    v0 = solved.value_of(solved.spec.initial)
    mover = solved.spec.initial.to_move
    return v0 > 0 if learner is mover else v0 < 0


def learner_trajectory(record: GameRecord, learner: PlayerId) -> list[tuple[str, int]]:
    return [(m.state_key, m.action) for m in record.moves if m.player is learner]


def winning_start_seats(solved: SolvedPositions) -> list[PlayerId]:
    """Seats that win the initial position under perfect play (empty for drawn games)."""
    v0 = solved.value_of(solved.spec.initial)
    mover = solved.spec.initial.to_move
    if v0 > 0:
        return [mover]
    if v0 < 0:
        return [mover.opponent()]
    return []


def greedy_policy_is_optimal(table: BoxTable, solved: SolvedPositions) -> bool:
    """True when the greedy policy provably wins every winning start.

    Exhaustive verification: from each winning start, the learner plays its
    greedy action (lowest legal action where no box exists) and the adversary
    tries every legal reply; the policy must hold the oracle value at every
    learner decision, which forces every reached terminal to be a learner win.
    """
    spec = table.spec
    for learner in winning_start_seats(solved):
        seen: set[str] = set()
        stack = [spec.initial]
        while stack:
            state = stack.pop()
            key = spec.canonical(state)
            if key in seen:
                continue
            seen.add(key)
            if solved.best_action[key] is None:  # terminal
                if spec.outcome(state).reward(learner) <= 0:
                    return False
                continue
            if state.to_move is learner:
                argmax = table.argmax_action(key)
                action = argmax if argmax is not None else legal_actions(spec, state)[0]
                if solved.action_value(state, action) != solved.values[key]:
                    return False
                stack.append(spec.transition(state, action))
            else:
                for action in legal_actions(spec, state):
                    stack.append(spec.transition(state, action))
    return True


def train(
    spec: GameSpec,
    opponent: Agent,
    params: BoxParams | None = None,
    seed: int = 0,
    max_rounds: int = 500,
    solved: SolvedPositions | None = None,
) -> TrainingRun:
    """Repeated seeded games against ``opponent``, reinforcing after each.

    Stops at mastery (greedy policy optimal everywhere it matters and every
    winning-start game in the last ``mastery_window`` rounds won, with at
    least that many rounds played) or at ``max_rounds``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    params = params or BoxParams()
    solved = solved or solve_positions(spec)
    table = init_boxes(spec, params)
    learner = BoxAgent(table)
    window: deque[tuple[bool, bool]] = deque(maxlen=params.mastery_window)
    history: list[RoundLog] = []
    mastered = False

    for i in range(1, max_rounds + 1):
        seat = learner_seat_for(i)
        if seat is PlayerId.FIRST:
            record = play_match(spec, learner, opponent, seed=round_seed(seed, i))
        else:
            record = play_match(spec, opponent, learner, seed=round_seed(seed, i))
        won = record.outcome.reward(seat) > 0
        winning_start = is_winning_start(solved, seat)
        trajectory = learner_trajectory(record, seat)
        reinforce(table, trajectory, record.outcome, seat)
        window.append((winning_start, won))
        history.append(RoundLog(i, seat, winning_start, won, len(trajectory)))
        if (
            len(history) >= params.mastery_window
            and len(window) == params.mastery_window
            and all(w for ws, w in window if ws)
            and greedy_policy_is_optimal(table, solved)
        ):
            mastered = True
            break

    return TrainingRun(
        rounds_played=len(history),
        mastered=mastered,
        history=history,
        seed=seed,
        table=table,
        params=params,
    )


def crowd_train(
    spec: GameSpec,
    records: Iterable[GameRecord],
    params: BoxParams | None = None,
    learner: PlayerId | None = None,
) -> BoxTable:
    """Replay recorded games into a fresh table, reinforcing per outcome.

    With ``learner`` unset both seats are treated as contributors: the
    winner's moves are rewarded and the loser's punished, which is what a
    crowd of mixed-skill transcripts teaches.
    """
    table = init_boxes(spec, params)
    seats = [learner] if learner is not None else [PlayerId.FIRST, PlayerId.SECOND]
    for record in records:
        if record.spec_id != spec.id or record.config != spec.config:
            raise ConfigMismatch(
                f"record {record.record_id} is {record.spec_id}:{record.config}, "
                f"table wants {spec.id}:{spec.config}"
            )
        state = spec.initial
        trajectories: dict[PlayerId, list[tuple[str, int]]] = {seat: [] for seat in seats}
        for move in record.moves:
            if move.player in trajectories:
                table.box_for(state)  # materialize so the update has a target
                trajectories[move.player].append((move.state_key, move.action))
            state = spec.transition(state, move.action)
        for seat in seats:
            reinforce(table, trajectories[seat], record.outcome, seat)
    return table


def export_boxes(table: BoxTable, path: str | Path) -> None:
    """Write ``key<TAB>action:weight,...`` lines sorted by key."""
    lines = []
    for key in sorted(table.boxes):
        cell = ",".join(f"{a}:{w:g}" for a, w in table.boxes[key])
        lines.append(f"{key}\t{cell}")
    Path(path).write_text("\n".join(lines) + "\n")


def import_boxes(spec: GameSpec, path: str | Path, params: BoxParams | None = None) -> BoxTable:
    table = init_boxes(spec, params)
    for line in Path(path).read_text().splitlines():
        if not line:
            continue
        key, cell = line.split("\t")
        box = []
        for part in cell.split(","):
            action, weight = part.split(":")
            box.append((int(action), float(weight)))
        table.boxes[key] = box
    return table
