"""Agent descriptor registry: build any agent from its text descriptor.

Descriptor grammar:
    random | first-legal | dictionary | exact | starter (nim only)
    minimax:easy | minimax:medium | minimax:hard | minimax:depth=N
    boxes:<table file>
    llm:<function>            (function is <game>_move; backend supplied by caller)
"""

from __future__ import annotations

from .core import Agent, FirstLegalAgent, GameError, GameSpec, RandomAgent
from .exact import DictionaryAgent, StarterNimAgent, build_dictionary, exact_agent
from .llmfn import LlmAgent, LlmBackend, MemoCache, move_function
from .search import DifficultyTier, MinimaxAgent, difficulty_agent


class UnknownAgent(GameError):
    """No agent matches the descriptor for this game."""


def build_agent(
    spec: GameSpec,
    descriptor: str,
    llm_backend: LlmBackend | None = None,
    llm_cache: MemoCache | None = None,
    dictionary_cap: int = 1_000_000,
) -> Agent:
    kind, _, arg = descriptor.partition(":")
    try:
        if kind == "random":
            return RandomAgent(spec)
        if kind == "first-legal":
            return FirstLegalAgent(spec)
        if kind == "exact":
            return exact_agent(spec)
        if kind == "starter":
            if spec.id != "nim":
                raise UnknownAgent("the starter heuristic is a nim agent")
            return StarterNimAgent(spec.config["k"])
        if kind == "dictionary":
            agent = DictionaryAgent(build_dictionary(spec, max_states=dictionary_cap))
            return agent
        if kind == "minimax":
            arg = arg or "medium"
            if arg.startswith("depth=") or arg.startswith("--depth "):
                depth = int(arg.split("=", 1)[1] if "=" in arg else arg.split()[1])
                return MinimaxAgent(spec, depth=depth, name=f"minimax:depth={depth}")
            return difficulty_agent(DifficultyTier(arg.lower()), spec)
        if kind == "boxes":
            from .boxes import GreedyBoxAgent, import_boxes

            if not arg:
                raise UnknownAgent("boxes agent needs a table file: boxes:<path>")
            return GreedyBoxAgent(import_boxes(spec, arg))
        if kind == "llm":
            if llm_backend is None:
                raise UnknownAgent("llm agents need a configured backend")
            fn_name = arg or f"{spec.id}_move"
            if fn_name != f"{spec.id}_move":
                raise UnknownAgent(f"unknown llm function {fn_name!r} for {spec.id}")
            return LlmAgent(
                move_function(spec),
                spec,
                llm_backend,
                cache=llm_cache if llm_cache is not None else MemoCache(),
            )
    except UnknownAgent:
        raise
    except GameError as exc:
        raise UnknownAgent(f"cannot build {descriptor!r} for {spec.id}: {exc}") from exc
    except ValueError as exc:
        raise UnknownAgent(f"bad descriptor {descriptor!r}: {exc}") from exc
    raise UnknownAgent(f"unknown agent descriptor {descriptor!r}")
