"""Depth-limited negamax with alpha-beta pruning and the three difficulty tiers.

Terminal leaves score +/-1000 so proven results always dominate heuristic
leaf values.  Extra-turn moves (Mancala store landings) are searched as
same-player nodes without a sign flip, and every move costs one ply of depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple

from .core import GameSpec, GameState, PlayerId, legal_actions
from .games.mancala import row_range, store_index

TERMINAL_SCALE = 1000.0
INF = float("inf")

EvalFn = Callable[[GameState, PlayerId], float]


def zero_eval(state: GameState, player: PlayerId) -> float:
    return 0.0


class DifficultyTier(Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


TIER_DEPTH = {DifficultyTier.EASY: 2, DifficultyTier.MEDIUM: 4, DifficultyTier.HARD: 6}


@dataclass
class SearchConfig:
    depth: int
    eval: EvalFn = zero_eval
    use_alpha_beta: bool = True


class SearchResult(NamedTuple):
    value: float
    action: int
    nodes: int


def mancala_eval(pits: tuple[int, ...], player: PlayerId) -> float:
    """Store lead plus a quarter-weight row-seed lead; antisymmetric by construction."""
    n = len(pits) // 2 - 1
    opponent = player.opponent()
    store_lead = pits[store_index(n, player)] - pits[store_index(n, opponent)]
    row_lead = sum(pits[i] for i in row_range(n, player)) - sum(pits[i] for i in row_range(n, opponent))
    return store_lead + 0.25 * row_lead


def _search(
    spec: GameSpec,
    state: GameState,
    depth: int,
    alpha: float,
    beta: float,
    cfg: SearchConfig,
    counter: list[int],
) -> float:
    """Negamax value of ``state`` from the perspective of ``state.to_move``."""
    counter[0] += 1
    actions = legal_actions(spec, state)
    if not actions:
        return spec.outcome(state).reward(state.to_move) * TERMINAL_SCALE
    if depth == 0:
        return cfg.eval(state, state.to_move)
    best = -INF
    for action in actions:
        child = spec.transition(state, action)
        if child.to_move is state.to_move:
            v = _search(spec, child, depth - 1, alpha, beta, cfg, counter)
        else:
            v = -_search(spec, child, depth - 1, -beta, -alpha, cfg, counter)
        if v > best:
            best = v
        if cfg.use_alpha_beta:
            if v > alpha:
                alpha = v
            if alpha >= beta:
                break
    return best


def minimax(spec: GameSpec, state: GameState, cfg: SearchConfig) -> SearchResult:
    """Best (value, action) to ``cfg.depth`` plies; lowest-index tie-break.

    With ``use_alpha_beta`` the root value and chosen action are identical to
    the plain search; pruning only skips work.
    """
    actions = legal_actions(spec, state)
    if not actions:
        raise ValueError(f"{spec.id}: minimax called on a terminal state")
    counter = [1]
    if cfg.depth == 0:
        return SearchResult(cfg.eval(state, state.to_move), actions[0], counter[0])
    best_value = -INF
    best_action = actions[0]
    alpha, beta = -INF, INF
    for action in actions:
        child = spec.transition(state, action)
        if child.to_move is state.to_move:
            v = _search(spec, child, cfg.depth - 1, alpha, beta, cfg, counter)
        else:
            v = -_search(spec, child, cfg.depth - 1, -beta, -alpha, cfg, counter)
        if v > best_value:
            best_value = v
            best_action = action
        if cfg.use_alpha_beta and v > alpha:
            alpha = v
    return SearchResult(best_value, best_action, counter[0])


def eval_for(spec: GameSpec) -> EvalFn:
    """Default leaf evaluation: seed heuristic for Mancala, zero elsewhere."""
    if spec.id == "mancala":
        return lambda state, player: mancala_eval(state.payload, player)
    return zero_eval


@dataclass
class MinimaxAgent:
    spec: GameSpec
    depth: int
    eval: EvalFn | None = None
    use_alpha_beta: bool = True
    name: str = "minimax"
    _last: SearchResult | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.eval is None:
            self.eval = eval_for(self.spec)

    def choose(self, state: GameState, rng: random.Random) -> int:
        cfg = SearchConfig(depth=self.depth, eval=self.eval, use_alpha_beta=self.use_alpha_beta)
        self._last = minimax(self.spec, state, cfg)
        return self._last.action

    def explain(self, state: GameState) -> str:
        if self._last is None:
            return f"Searching {self.depth} plies ahead."
        value = self._last.value
        if value >= TERMINAL_SCALE:
            verdict = "a forced win"
        elif value <= -TERMINAL_SCALE:
            verdict = "a forced loss"
        else:
            verdict = f"an evaluation of {value:+.2f}"
        return f"Looked {self.depth} plies ahead; move {self._last.action} gives {verdict}."


def difficulty_agent(level: DifficultyTier, spec: GameSpec) -> MinimaxAgent:
    depth = TIER_DEPTH[level]
    return MinimaxAgent(spec, depth=depth, name=f"minimax:{level.value}")
