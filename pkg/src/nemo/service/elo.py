"""Elo ratings against fixed AI anchors.

Humans start at 1200 and move with K=32; the AI opponents are anchors whose
ratings never change, so human ratings stay comparable over time.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

K_FACTOR = 32.0
INITIAL_RATING = 1200.0
DEFAULT_ANCHOR = 1200.0

ANCHORS = {
    "minimax:easy": 1000.0,
    "minimax:medium": 1400.0,
    "minimax:hard": 1800.0,
    "exact": 2000.0,
    "dictionary": 2000.0,
}


def anchor_rating(agent_name: str) -> float:
    if agent_name in ANCHORS:
        return ANCHORS[agent_name]
    base = agent_name.split(":")[0]
    return ANCHORS.get(base, DEFAULT_ANCHOR)


def expected_score(rating: float, opponent_rating: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((opponent_rating - rating) / 400.0))


def rating_delta(rating: float, opponent_rating: float, score: float) -> float:
    """Score is 1 for a win, 0.5 for a draw, 0 for a loss."""
    return K_FACTOR * (score - expected_score(rating, opponent_rating))


@dataclass
class LeaderboardEntry:
    participant: str
    rating: float = INITIAL_RATING
    games: int = 0
    wins: int = 0
    draws: int = 0
    losses: int = 0

    def as_dict(self) -> dict:
        return {
            "participant": self.participant,
            "rating": round(self.rating, 2),
            "games": self.games,
            "wins": self.wins,
            "draws": self.draws,
            "losses": self.losses,
        }


class Leaderboard:
    """Rating state for every participant; thread-safe."""

    def __init__(self) -> None:
        self._entries: dict[str, LeaderboardEntry] = {}
        self._lock = threading.Lock()

    def record(self, participant: str, agent_name: str, score: float) -> float:
        """Apply one result against an AI anchor; returns the rating delta."""
        with self._lock:
            entry = self._entries.setdefault(participant, LeaderboardEntry(participant))
            delta = rating_delta(entry.rating, anchor_rating(agent_name), score)
            entry.rating += delta
            entry.games += 1
            if score == 1.0:
                entry.wins += 1
            elif score == 0.0:
                entry.losses += 1
            else:
                entry.draws += 1
            return delta

    def top(self, limit: int | None = None) -> list[LeaderboardEntry]:
        """Rating descending; ties by fewer games, then name."""
        with self._lock:
            ranked = sorted(self._entries.values(), key=lambda e: (-e.rating, e.games, e.participant))
        return ranked[:limit] if limit is not None else ranked

    def get(self, participant: str) -> LeaderboardEntry | None:
        with self._lock:
            return self._entries.get(participant)

    def snapshot(self, path: str | Path) -> None:
        """Atomic JSON snapshot (write then rename)."""
        target = Path(path)
        data = [entry.as_dict() for entry in self.top()]
        tmp = target.with_suffix(target.suffix + ".tmp")
        tmp.write_text(json.dumps(data, indent=2))
        tmp.replace(target)

    def restore(self, path: str | Path) -> None:
        target = Path(path)
        if not target.exists():
            return
        with self._lock:
            for raw in json.loads(target.read_text()):
                self._entries[raw["participant"]] = LeaderboardEntry(
                    participant=raw["participant"],
                    rating=float(raw["rating"]),
                    games=int(raw["games"]),
                    wins=int(raw["wins"]),
                    draws=int(raw["draws"]),
                    losses=int(raw["losses"]),
                )
