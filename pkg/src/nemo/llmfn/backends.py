"""Pluggable completion backends: solver-driven, transcript replay, and the
remote chat-completion wire protocol under the bring-your-own-key model."""

from __future__ import annotations

import json
import os
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Protocol

from ..core import Agent, GameError, GameSpec, GameState

ENV_API_KEY = "NEMO_LLM_API_KEY"
ENV_BASE_URL = "NEMO_LLM_BASE_URL"
ENV_MODEL = "NEMO_LLM_MODEL"


class BackendUnavailable(GameError):
    """Transport-level failure after retries; callers fall back."""


class LlmBackend(Protocol):
    kind: str

    def complete(self, prompt: str, *, spec: GameSpec | None = None, state: GameState | None = None) -> str: ...


@dataclass
class OracleBackend:
    """Answers every prompt with a solver agent's move for the live state.

    Deterministic stand-in for a remote model: lets the whole gated pipeline
    run offline with perfectly predictable answers.
    """

    agent: Agent
    kind: str = "oracle"

    def complete(self, prompt: str, *, spec: GameSpec | None = None, state: GameState | None = None) -> str:
        if spec is None or state is None:
            raise BackendUnavailable("oracle backend needs the live game state")
        import random

        action = self.agent.choose(state, random.Random(0))
        explain = getattr(self.agent, "explain", None)
        rationale = f" {explain(state)}" if explain else ""
        return f"I play {action}.{rationale}"


@dataclass
class ReplayBackend:
    """Returns recorded responses in order, regardless of the prompt.

    Transcript format: newline-delimited JSON objects {"prompt": ..., "response": ...}.
    Raises BackendUnavailable when the transcript runs out.
    """

    responses: list[str]
    kind: str = "replay"
    _cursor: int = 0

    @staticmethod
    def from_transcript(text: str) -> "ReplayBackend":
        responses = []
        for line in text.splitlines():
            if not line.strip():
                continue
            responses.append(json.loads(line)["response"])
        return ReplayBackend(responses)

    def complete(self, prompt: str, *, spec: GameSpec | None = None, state: GameState | None = None) -> str:
        if self._cursor >= len(self.responses):
            raise BackendUnavailable("replay transcript exhausted")
        response = self.responses[self._cursor]
        self._cursor += 1
        return response


@dataclass
class RemoteBackend:
    """Chat-completion client: POST {base_url}/chat/completions with
    {model, messages, temperature}; temperature pinned to 0 by default."""

    base_url: str
    api_key: str
    model: str
    temperature: float = 0.0
    timeout: float = 30.0
    transport_retries: int = 2
    max_concurrency: int = 4
    kind: str = "remote"
    _gate: threading.Semaphore = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._gate = threading.Semaphore(self.max_concurrency)

    @staticmethod
    def from_env() -> "RemoteBackend":
        api_key = os.environ.get(ENV_API_KEY, "")
        base_url = os.environ.get(ENV_BASE_URL, "")
        model = os.environ.get(ENV_MODEL, "")
        if not api_key or not base_url or not model:
            raise BackendUnavailable(
                f"remote backend needs {ENV_API_KEY}, {ENV_BASE_URL} and {ENV_MODEL} set"
            )
        return RemoteBackend(base_url=base_url, api_key=api_key, model=model)

    def complete(self, prompt: str, *, spec: GameSpec | None = None, state: GameState | None = None) -> str:
        body = json.dumps(
            {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": self.temperature,
            }
        ).encode()
        request = urllib.request.Request(
            self.base_url.rstrip("/") + "/chat/completions",
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.api_key}",
            },
            method="POST",
        )
        last_error: Exception | None = None
        for _ in range(self.transport_retries + 1):
            try:
                with self._gate:
                    with urllib.request.urlopen(request, timeout=self.timeout) as reply:
                        payload = json.loads(reply.read().decode())
                return payload["choices"][0]["message"]["content"]
            except (urllib.error.URLError, OSError, KeyError, json.JSONDecodeError, TimeoutError) as exc:
                last_error = exc
        raise BackendUnavailable(f"remote backend failed after retries: {last_error}")
