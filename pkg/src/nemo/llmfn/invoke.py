"""Gated invocation: render the prompt, consult the cache, query the backend,
parse and validate, retry, and fall back — so the returned move is always
legal no matter what the backend says."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable

from ..core import Agent, FirstLegalAgent, GameSpec, GameState, legal_actions
from .backends import BackendUnavailable, LlmBackend
from .cache import MemoCache
from .prompts import NoLegalMove, parse_move, serialize_state

Serializer = Callable[[GameSpec, GameState], dict[str, str]]
Parser = Callable[[GameSpec, str, GameState], int]


@dataclass
class LlmFunction:
    """A named prompt template with its serializer, parser and fallback policy."""

    name: str
    template: str
    serializer: Serializer
    parser: Parser
    fallback: Agent
    max_retries: int = 2

    def render(self, spec: GameSpec, state: GameState) -> str:
        return self.template.format(**self.serializer(spec, state))


@dataclass
class InvocationTrace:
    prompt: str
    backend_kind: str
    raw_response: str | None = None
    parsed_action: int | None = None
    parse_error: str | None = None
    cache_outcome: str = "miss"  # exact-hit | semantic-hit | miss
    retries_used: int = 0
    fallback_used: bool = False

    def as_dict(self) -> dict[str, Any]:
        return {
            "prompt": self.prompt,
            "backend": self.backend_kind,
            "raw_response": self.raw_response,
            "parsed_action": self.parsed_action,
            "parse_error": self.parse_error,
            "cache_outcome": self.cache_outcome,
            "retries_used": self.retries_used,
            "fallback_used": self.fallback_used,
        }


def invoke(
    fn: LlmFunction,
    spec: GameSpec,
    state: GameState,
    backend: LlmBackend,
    cache: MemoCache,
    rng: random.Random | None = None,
) -> tuple[int, InvocationTrace]:
    """Resolve one move through the gate; the returned action is always legal.

    Cache order is exact then semantic; a hit that fails validation counts as
    a miss and goes to the backend.  Only parsed-and-validated backend
    responses are cached.  Stats satisfy hits + backend_calls == invocations.
    """
    prompt = fn.render(spec, state)
    trace = InvocationTrace(prompt=prompt, backend_kind=backend.kind)
    rng = rng or random.Random(0)

    def try_accept(response: str) -> int | None:
        trace.raw_response = response
        try:
            action = fn.parser(spec, response, state)
        except NoLegalMove as exc:
            trace.parse_error = str(exc)
            return None
        if action not in legal_actions(spec, state):
            trace.parse_error = f"parsed action {action} is not legal"
            return None
        trace.parsed_action = action
        trace.parse_error = None
        return action

    cached = cache.exact_lookup(fn.name, prompt)
    if cached is not None:
        action = try_accept(cached)
        if action is not None:
            trace.cache_outcome = "exact-hit"
            cache.stats.hits += 1
            return action, trace

    semantic = cache.semantic_lookup(prompt)
    if semantic is not None:
        action = try_accept(semantic)
        if action is not None:
            trace.cache_outcome = "semantic-hit"
            cache.stats.hits += 1
            return action, trace

    trace.cache_outcome = "miss"
    cache.stats.misses += 1
    cache.stats.backend_calls += 1
    for attempt in range(fn.max_retries + 1):
        trace.retries_used = attempt
        try:
            response = backend.complete(prompt, spec=spec, state=state)
        except BackendUnavailable as exc:
            trace.parse_error = str(exc)
            break
        action = try_accept(response)
        if action is not None:
            cache.put(fn.name, prompt, response)
            return action, trace

    trace.fallback_used = True
    action = fn.fallback.choose(state, rng)
    trace.parsed_action = None
    return action, trace


def _template_serializer(spec: GameSpec, state: GameState) -> dict[str, str]:
    return {"state": serialize_state(spec, state)}


def move_function(spec: GameSpec, fallback: Agent | None = None, max_retries: int = 2) -> LlmFunction:
    """The standard move-query function for a game: prompt is the serialized
    state, parser extracts the first legal token, fallback plays lowest legal."""
    return LlmFunction(
        name=f"{spec.id}_move",
        template="{state}",
        serializer=_template_serializer,
        parser=parse_move,
        fallback=fallback or FirstLegalAgent(spec),
        max_retries=max_retries,
    )


@dataclass
class LlmAgent:
    """Plays through the gated pipeline; retains the last trace for display."""

    fn: LlmFunction
    spec: GameSpec
    backend: LlmBackend
    cache: MemoCache = field(default_factory=MemoCache)
    name: str = "llm"
    last_trace: InvocationTrace | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.name == "llm":
            self.name = f"llm:{self.fn.name}"

    def choose(self, state: GameState, rng: random.Random) -> int:
        action, trace = invoke(self.fn, self.spec, state, self.backend, self.cache, rng)
        self.last_trace = trace
        return action

    def explain(self, state: GameState) -> str:
        if self.last_trace is None:
            return "Gated language-model move."
        if self.last_trace.fallback_used:
            return f"Backend gave no legal move; fallback {self.fn.fallback.name} decided."
        source = self.last_trace.cache_outcome
        raw = (self.last_trace.raw_response or "").strip()
        return f"[{source}] {raw}" if raw else f"[{source}]"
