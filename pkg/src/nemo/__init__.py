"""Strategic game agents and training harness.

Four agent families over a shared two-player game substrate: precomputed
dictionary tables, exact mathematical solvers, depth-limited minimax tiers,
and trial-and-error box learners; plus gated LLM move functions with
memoization, an iterative heuristic-training loop, and a leaderboard service.
"""

__version__ = "0.1.0"
