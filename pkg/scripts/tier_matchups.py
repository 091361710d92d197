#!/usr/bin/env python3
"""Head-to-head win rates between the difficulty tiers on Mancala.

Usage:
  python scripts/tier_matchups.py --games 100 > matchups.csv
"""

from __future__ import annotations

import argparse
import itertools
import sys

from nemo.core import PlayerId, play_match
from nemo.games import mancala_spec
from nemo.search import DifficultyTier, difficulty_agent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--games", type=int, default=100)
    parser.add_argument("--pits-per-side", type=int, default=6)
    parser.add_argument("--seeds-per-pit", type=int, default=4)
    args = parser.parse_args()

    spec = mancala_spec(args.pits_per_side, args.seeds_per_pit)
    print("a,b,a_wins,b_wins,draws")
    for tier_a, tier_b in itertools.combinations(DifficultyTier, 2):
        wins_a = wins_b = draws = 0
        for seed in range(args.games):
            a = difficulty_agent(tier_a, spec)
            b = difficulty_agent(tier_b, spec)
            if seed % 2 == 0:
                record = play_match(spec, a, b, seed=seed)
                reward = record.outcome.reward(PlayerId.FIRST)
            else:
                record = play_match(spec, b, a, seed=seed)
                reward = record.outcome.reward(PlayerId.SECOND)
            if reward > 0:
                wins_a += 1
            elif reward < 0:
                wins_b += 1
            else:
                draws += 1
        print(f"{tier_a.value},{tier_b.value},{wins_a},{wins_b},{draws}")
        sys.stderr.write(f"{tier_a.value} vs {tier_b.value}: {wins_a}-{wins_b}-{draws}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
