import random

import pytest

from nemo.core import PlayerId, RandomAgent, legal_actions, play_match
from nemo.exact import nim_optimal_move, solve_positions
from nemo.games import mancala_spec, nim_spec, tictactoe_spec
from nemo.search import (
    TIER_DEPTH,
    DifficultyTier,
    MinimaxAgent,
    SearchConfig,
    difficulty_agent,
    mancala_eval,
    minimax,
    zero_eval,
)


def random_positions(spec, count, seed=0, min_plies=2, max_plies=20):
    """Non-terminal states sampled from seeded random playouts."""
    rng = random.Random(seed)
    positions = []
    while len(positions) < count:
        state = spec.initial
        plies = rng.randint(min_plies, max_plies)
        for _ in range(plies):
            if spec.terminal(state):
                break
            state = spec.transition(state, rng.choice(legal_actions(spec, state)))
        if not spec.terminal(state):
            positions.append(state)
    return positions


def test_depth_zero_returns_eval_and_first_action(mancala):
    result = minimax(mancala, mancala.initial, SearchConfig(depth=0))
    assert result.value == 0.0
    assert result.action == 0


def test_full_depth_tictactoe_root_is_draw(ttt):
    result = minimax(ttt, ttt.initial, SearchConfig(depth=9, eval=zero_eval))
    assert result.value == 0.0


def test_full_depth_equals_solver_values(ttt, ttt_solved):
    rng = random.Random(5)
    keys = rng.sample(ttt_solved.non_terminal_keys(), 60)
    for key in keys:
        state = ttt_solved.states[key]
        result = minimax(ttt, state, SearchConfig(depth=9))
        assert result.value == ttt_solved.values[key] * 1000.0


def test_nim_full_search_finds_the_formula_move(nim83):
    result = minimax(nim83, nim83.initial, SearchConfig(depth=8))
    assert result.value == 1000.0
    assert result.action == 3


def test_nim_search_matches_formula_when_depth_covers_game():
    spec = nim_spec(8, 3)
    solved = solve_positions(spec)
    for key in solved.non_terminal_keys():
        state = solved.states[key]
        if state.payload <= 6:
            result = minimax(spec, state, SearchConfig(depth=6))
            if solved.values[key] == 1:
                assert result.action == nim_optimal_move(state.payload, 3)
            else:
                assert result.action == 1  # all moves lose; lowest index


def test_mancala_eval_initial_symmetry(mancala):
    assert mancala_eval(mancala.initial.payload, PlayerId.FIRST) == 0.0


def test_mancala_eval_store_lead():
    pits = (0, 0, 0, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 6)
    assert mancala_eval(pits, PlayerId.FIRST) == 2.0
    assert mancala_eval(pits, PlayerId.SECOND) == -2.0


def test_mancala_eval_row_weight():
    pits = (4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)
    assert mancala_eval(pits, PlayerId.FIRST) == 1.0  # 4 row seeds at quarter weight


def test_mancala_eval_antisymmetric_on_playouts(mancala):
    for state in random_positions(mancala, 50, seed=11):
        a = mancala_eval(state.payload, PlayerId.FIRST)
        b = mancala_eval(state.payload, PlayerId.SECOND)
        assert a + b == pytest.approx(0.0)


def test_alpha_beta_equals_plain_minimax_on_sampled_positions(mancala):
    positions = random_positions(mancala, 60, seed=3)
    for i, state in enumerate(positions):
        depth = 1 + (i % 4)
        eval_fn = lambda s, p: mancala_eval(s.payload, p)
        plain = minimax(mancala, state, SearchConfig(depth=depth, eval=eval_fn, use_alpha_beta=False))
        pruned = minimax(mancala, state, SearchConfig(depth=depth, eval=eval_fn, use_alpha_beta=True))
        assert plain.value == pruned.value
        assert plain.action == pruned.action


def test_alpha_beta_explores_fewer_nodes(mancala):
    eval_fn = lambda s, p: mancala_eval(s.payload, p)
    for depth in (4, 5):
        plain = minimax(mancala, mancala.initial, SearchConfig(depth=depth, eval=eval_fn, use_alpha_beta=False))
        pruned = minimax(mancala, mancala.initial, SearchConfig(depth=depth, eval=eval_fn, use_alpha_beta=True))
        assert pruned.nodes < plain.nodes


def test_tier_depths_increase():
    assert TIER_DEPTH[DifficultyTier.EASY] == 2
    assert TIER_DEPTH[DifficultyTier.MEDIUM] == 4
    assert TIER_DEPTH[DifficultyTier.HARD] == 6
    assert TIER_DEPTH[DifficultyTier.EASY] < TIER_DEPTH[DifficultyTier.MEDIUM] < TIER_DEPTH[DifficultyTier.HARD]


def test_difficulty_agent_uses_game_eval(mancala, nim83):
    hard = difficulty_agent(DifficultyTier.HARD, mancala)
    assert hard.depth == 6
    assert hard.name == "minimax:hard"
    rng = random.Random(0)
    assert hard.choose(mancala.initial, rng) in legal_actions(mancala, mancala.initial)
    easy_nim = difficulty_agent(DifficultyTier.EASY, nim83)
    assert easy_nim.eval is not None
    assert easy_nim.eval(nim83.initial, PlayerId.FIRST) == 0.0


def test_hard_beats_easy_head_to_head(mancala):
    hard_wins = 0
    games = 30
    for seed in range(games):
        hard = difficulty_agent(DifficultyTier.HARD, mancala)
        easy = difficulty_agent(DifficultyTier.EASY, mancala)
        if seed % 2 == 0:
            record = play_match(mancala, hard, easy, seed=seed)
            hard_wins += record.outcome.reward(PlayerId.FIRST) > 0
        else:
            record = play_match(mancala, easy, hard, seed=seed)
            hard_wins += record.outcome.reward(PlayerId.SECOND) > 0
    assert hard_wins >= 0.6 * games


def test_extra_turn_nodes_do_not_flip_sign(mancala):
    # The store-landing opening (pit 2) banks a seed and keeps the turn:
    # hand-computed eval is (1 - 0) + 0.25 * (23 - 24) = +0.75.  A sign flip
    # at the extra-turn node would surface this line as negative.
    eval_fn = lambda s, p: mancala_eval(s.payload, p)
    for depth in (1, 2):
        result = minimax(mancala, mancala.initial, SearchConfig(depth=depth, eval=eval_fn))
        assert result.action == 2
        assert result.value == pytest.approx(0.75)
