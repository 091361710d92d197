"""Crowdsourcing backend: sessions, Elo leaderboard, batched persistence, HTTP API."""

from .elo import ANCHORS, K_FACTOR, Leaderboard, LeaderboardEntry, anchor_rating, expected_score, rating_delta
from .http import ApiHandler, GameServer
from .sessions import GameService, IllegalMove, NotYourTurn, SessionNotFound
from .store import FlushWorker, RecordStore, StoreUnavailable, SyncQueue

__all__ = [
    "ANCHORS",
    "ApiHandler",
    "FlushWorker",
    "GameServer",
    "GameService",
    "IllegalMove",
    "K_FACTOR",
    "Leaderboard",
    "LeaderboardEntry",
    "NotYourTurn",
    "RecordStore",
    "SessionNotFound",
    "StoreUnavailable",
    "SyncQueue",
    "anchor_rating",
    "expected_score",
    "rating_delta",
]
