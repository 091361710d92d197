"""The iterative heuristic-refinement loop: evaluate a policy over a dataset
of seeded match cases, compute a normalized loss, update, repeat until the
loss clears a threshold or the iteration budget runs out."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .core import Agent, GameSpec, PlayerId, play_match
from .boxes import (
    BoxAgent,
    BoxParams,
    BoxTable,
    init_boxes,
    learner_seat_for,
    learner_trajectory,
    reinforce,
    round_seed,
    winning_start_seats,
)
from .exact import SolvedPositions, solve_positions


class EmptyRewards(ValueError):
    """Loss of an empty reward list is undefined."""


@dataclass
class Heuristic:
    """A named decision policy plus whatever artifact backs it (formula text,
    a box table, a prompt)."""

    id: str
    agent: Agent
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EvaluationCase:
    """One scored match: the heuristic sits in ``seat`` against ``opponent``."""

    spec: GameSpec
    opponent: Agent
    seed: int
    seat: PlayerId = PlayerId.FIRST


def evaluate(heuristic: Heuristic, dataset: Sequence[EvaluationCase]) -> list[float]:
    """One reward per case: +1 win, 0 draw, -1 loss from the heuristic's seat.

    An illegal move by the heuristic forfeits the match, so a faulting policy
    scores -1 with the fault flagged in the underlying record.
    """
    if not dataset:
        raise EmptyRewards("evaluation dataset is empty")
    rewards: list[float] = []
    for case in dataset:
        if case.seat is PlayerId.FIRST:
            record = play_match(case.spec, heuristic.agent, case.opponent, seed=case.seed)
        else:
            record = play_match(case.spec, case.opponent, heuristic.agent, seed=case.seed)
        rewards.append(float(record.outcome.reward(case.seat)))
    return rewards


def loss(rewards: Sequence[float]) -> float:
    """Fraction of value lost relative to winning everything: 1 - (mean+1)/2."""
    if not rewards:
        raise EmptyRewards("no rewards to score")
    return 1.0 - (statistics.fmean(rewards) + 1.0) / 2.0


@dataclass(frozen=True)
class IterationLog:
    k: int
    heuristic_id: str
    rewards: tuple[float, ...]
    loss: float

    @property
    def mean_reward(self) -> float:
        return statistics.fmean(self.rewards)


@dataclass
class TrainingHistory:
    iterations: list[IterationLog] = field(default_factory=list)
    stopped: str = "max_iterations"  # or "converged"

    @property
    def converged(self) -> bool:
        return self.stopped == "converged"

    def to_csv(self) -> str:
        lines = ["k,heuristic_id,mean_reward,loss"]
        for entry in self.iterations:
            lines.append(f"{entry.k},{entry.heuristic_id},{entry.mean_reward:g},{entry.loss:g}")
        return "\n".join(lines) + "\n"


UpdateFn = Callable[[Heuristic, list[float]], Heuristic]
DataSource = Callable[[int], Sequence[EvaluationCase]]


def run_training(
    h0: Heuristic,
    data_source: DataSource,
    update: UpdateFn,
    tau: float,
    max_k: int,
) -> tuple[Heuristic, TrainingHistory]:
    """Evaluate -> threshold test -> update, until loss <= tau or max_k.

    Rewards reset every iteration; each iteration's (k, heuristic, rewards,
    loss) is recorded, including the final one, so the history length always
    equals the number of evaluation passes.
    """
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    if max_k < 1:
        raise ValueError(f"max_k must be >= 1, got {max_k}")
    history = TrainingHistory()
    heuristic = h0
    k = 1
    while True:
        rewards = evaluate(heuristic, data_source(k))
        current = loss(rewards)
        history.iterations.append(IterationLog(k, heuristic.id, tuple(rewards), current))
        if current <= tau:
            history.stopped = "converged"
            break
        if k >= max_k:
            history.stopped = "max_iterations"
            break
        heuristic = update(heuristic, rewards)
        k += 1
    return heuristic, history


def identity_update(heuristic: Heuristic, rewards: list[float]) -> Heuristic:
    """The no-learning control: hand back the same heuristic."""
    return heuristic


def scripted_update(replacements: Iterable[Heuristic]) -> UpdateFn:
    """Swap in the next pre-written heuristic each iteration (manual-refinement
    emulation); sticks with the last one when the script runs out."""
    queue = list(replacements)

    def update(heuristic: Heuristic, rewards: list[float]) -> Heuristic:
        return queue.pop(0) if queue else heuristic

    return update


class BoxesRefinement:
    """Binds the refinement loop to box-table reinforcement.

    Each iteration's dataset is ``cases_per_iteration`` seeded matches; the
    update replays those same matches (same seeds, same table state, so the
    trajectories are bit-identical to what evaluation played) and reinforces
    the table from them.  With one case per iteration and alternating seats
    this is step-for-step the same computation as ``boxes.train``.

    ``seat_policy``: "alternate" mirrors direct training; "winning" puts the
    learner on the seat that wins the initial position under perfect play,
    the setting where a loss threshold is meaningful.
    """

    def __init__(
        self,
        spec: GameSpec,
        opponent: Agent,
        params: BoxParams | None = None,
        seed: int = 0,
        cases_per_iteration: int = 1,
        seat_policy: str = "alternate",
        solved: SolvedPositions | None = None,
    ) -> None:
        if seat_policy not in ("alternate", "winning"):
            raise ValueError(f"unknown seat_policy {seat_policy!r}")
        self.spec = spec
        self.opponent = opponent
        self.seed = seed
        self.cases_per_iteration = cases_per_iteration
        self.seat_policy = seat_policy
        self.solved = solved or solve_positions(spec)
        self.table: BoxTable = init_boxes(spec, params)
        self._version = 0

    def _seat(self, round_index: int) -> PlayerId:
        if self.seat_policy == "alternate":
            return learner_seat_for(round_index)
        winners = winning_start_seats(self.solved)
        return winners[0] if winners else PlayerId.FIRST

    def _cases(self, k: int) -> list[EvaluationCase]:
        cases = []
        for j in range(self.cases_per_iteration):
            index = (k - 1) * self.cases_per_iteration + j + 1
            cases.append(
                EvaluationCase(self.spec, self.opponent, seed=round_seed(self.seed, index), seat=self._seat(index))
            )
        return cases

    def data_source(self, k: int) -> list[EvaluationCase]:
        return self._cases(k)

    def heuristic(self) -> Heuristic:
        return Heuristic(
            id=f"boxes#{self._version}",
            agent=BoxAgent(self.table),
            metadata={"spec": self.spec.id, "version": self._version},
        )

    def update(self, heuristic: Heuristic, rewards: list[float]) -> Heuristic:
        k = self._version + 1
        records = []
        for case in self._cases(k):  # replay before touching weights
            if case.seat is PlayerId.FIRST:
                records.append((case, play_match(case.spec, heuristic.agent, case.opponent, seed=case.seed)))
            else:
                records.append((case, play_match(case.spec, case.opponent, heuristic.agent, seed=case.seed)))
        for case, record in records:
            reinforce(self.table, learner_trajectory(record, case.seat), record.outcome, case.seat)
        self._version = k
        return self.heuristic()
