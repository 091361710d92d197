#!/usr/bin/env python3
"""Rounds-to-mastery sweep over pile sizes and take limits.

Reproduces the benchmark behind the trend acceptance check and writes one
CSV row per (N, K, seed).  Median summary goes to stderr.

Usage:
  python scripts/mastery_sweep.py --configs 5:3,9:3,13:3,17:3,21:3 --seeds 100 > sweep.csv
"""

from __future__ import annotations

import argparse
import statistics
import sys

from nemo.boxes import BoxParams, train
from nemo.exact import SamplingOptimalAgent, solve_positions
from nemo.games import nim_spec


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", default="5:3,9:3,13:3,17:3,21:3", help="comma list of N:K pairs")
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--max-rounds", type=int, default=500)
    parser.add_argument("--win-delta", type=float, default=4.0)
    parser.add_argument("--loss-delta", type=float, default=-1.0)
    parser.add_argument("--window", type=int, default=2)
    args = parser.parse_args()

    params = BoxParams(win_delta=args.win_delta, loss_delta=args.loss_delta, mastery_window=args.window)
    print("N,K,seed,L,mastered")
    for pair in args.configs.split(","):
        n, k = (int(x) for x in pair.split(":"))
        spec = nim_spec(n, k)
        solved = solve_positions(spec)
        opponent = SamplingOptimalAgent(solved)
        rounds = []
        for seed in range(args.seeds):
            run = train(spec, opponent, params, seed=seed, max_rounds=args.max_rounds, solved=solved)
            rounds.append(run.rounds_played)
            print(f"{n},{k},{seed},{run.rounds_played},{int(run.mastered)}")
        sys.stderr.write(
            f"N={n} K={k}: median L={statistics.median(rounds)}, "
            f"mastered {sum(r < args.max_rounds for r in rounds)}/{args.seeds}\n"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
