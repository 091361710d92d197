"""Exact and embedding-similarity memoization for prompt/response pairs.

The exact tier is a plain dict keyed on (function name, canonical prompt).
The semantic tier stores (embedding, prompt, response) triples and answers
any lookup whose cosine similarity clears the threshold; at a threshold of
1.0 it degenerates to exact text comparison.  The reference embedder is a
lowercase word-frequency vector: deterministic and dependency-free.
"""

from __future__ import annotations

import math
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

_WORD = re.compile(r"[a-z0-9']+")

Embedding = dict[str, float]
Embedder = Callable[[str], Embedding]


def bag_of_words(text: str) -> Embedding:
    return dict(Counter(_WORD.findall(text.lower())))


def cosine(u: Embedding, v: Embedding) -> float:
    if not u or not v:
        return 0.0
    dot = sum(weight * v.get(word, 0.0) for word, weight in u.items())
    nu = math.sqrt(sum(w * w for w in u.values()))
    nv = math.sqrt(sum(w * w for w in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    backend_calls: int = 0

    @property
    def total(self) -> int:
        return self.hits + self.backend_calls


@dataclass
class SemanticEntry:
    embedding: Embedding
    prompt: str
    response: str


@dataclass
class MemoCache:
    """Two-tier response cache; reads are lock-free, inserts serialized."""

    threshold: float = 0.95
    semantic_enabled: bool = False
    embedder: Embedder = bag_of_words
    exact: dict[tuple[str, str], str] = field(default_factory=dict)
    semantic: list[SemanticEntry] = field(default_factory=list)
    stats: CacheStats = field(default_factory=CacheStats)
    _write_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.threshold <= 1.0):
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")

    def exact_lookup(self, fn_name: str, prompt: str) -> str | None:
        return self.exact.get((fn_name, prompt))

    def semantic_lookup(self, prompt: str) -> str | None:
        """Best entry at cosine >= threshold, else None."""
        if not self.semantic_enabled or not self.semantic:
            return None
        if self.threshold >= 1.0:
            for entry in self.semantic:
                if entry.prompt == prompt:
                    return entry.response
            return None
        query = self.embedder(prompt)
        best: SemanticEntry | None = None
        best_sim = 0.0
        for entry in self.semantic:
            sim = cosine(query, entry.embedding)
            if sim > best_sim:
                best_sim = sim
                best = entry
        if best is not None and best_sim >= self.threshold:
            return best.response
        return None

    def put(self, fn_name: str, prompt: str, response: str) -> None:
        with self._write_lock:
            self.exact[(fn_name, prompt)] = response
            if self.semantic_enabled:
                self.semantic.append(SemanticEntry(self.embedder(prompt), prompt, response))


def semantic_lookup(cache: MemoCache, prompt: str) -> str | None:
    return cache.semantic_lookup(prompt)
