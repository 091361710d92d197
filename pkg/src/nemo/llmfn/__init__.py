"""Gated LLM move functions: prompt serialization, parsing, memoization,
and pluggable backends."""

from .backends import (
    ENV_API_KEY,
    ENV_BASE_URL,
    ENV_MODEL,
    BackendUnavailable,
    LlmBackend,
    OracleBackend,
    RemoteBackend,
    ReplayBackend,
)
from .cache import CacheStats, MemoCache, bag_of_words, cosine, semantic_lookup
from .invoke import InvocationTrace, LlmAgent, LlmFunction, invoke, move_function
from .prompts import NoLegalMove, parse_move, serialize_state

__all__ = [
    "ENV_API_KEY",
    "ENV_BASE_URL",
    "ENV_MODEL",
    "BackendUnavailable",
    "CacheStats",
    "InvocationTrace",
    "LlmAgent",
    "LlmBackend",
    "LlmFunction",
    "MemoCache",
    "NoLegalMove",
    "OracleBackend",
    "RemoteBackend",
    "ReplayBackend",
    "bag_of_words",
    "cosine",
    "invoke",
    "move_function",
    "parse_move",
    "semantic_lookup",
    "serialize_state",
]
