"""Operator surface: play in the terminal, solve games, train box learners,
run refinement loops, and launch the service.

Machine-readable output (records, CSV, reports) goes to stdout or --out;
boards, prompts and progress go to stderr.  Exit codes: 0 success, 2 usage
error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .agents import UnknownAgent, build_agent
from .boxes import BoxParams, export_boxes, train
from .core import GameError, GameSpec, GameState, PlayerId, legal_actions
from .exact import (
    SamplingOptimalAgent,
    StateSpaceTooLarge,
    build_dictionary,
    export_dictionary,
    solve_positions,
)
from .games import make_spec
from .llmfn import ENV_API_KEY, MemoCache, OracleBackend, RemoteBackend, ReplayBackend
from .service import GameServer, GameService, RecordStore
from .training import (
    BoxesRefinement,
    EvaluationCase,
    Heuristic,
    identity_update,
    run_training,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


@dataclass(frozen=True)
class CurriculumTier:
    tier: str
    summary: str
    recipes: tuple[str, ...]


CURRICULUM = (
    CurriculumTier(
        "foundational",
        "Dictionary agents on predefined games: predefine the move for every state.",
        (
            "nemo solve tictactoe --export ttt.tsv",
            "nemo play tictactoe --agent dictionary",
        ),
    ),
    CurriculumTier(
        "intermediate",
        "Rule-based and search agents with an editable evaluation heuristic.",
        (
            "nemo play nim --n 8 --k 3 --agent exact",
            "nemo play mancala --agent minimax:medium",
        ),
    ),
    CurriculumTier(
        "advanced",
        "Data-driven agents: box-table reinforcement, refinement loops, gated LLM moves.",
        (
            "nemo train nim --n 5 --k 3 --seeds 100",
            "nemo loop nim --n 5 --k 3 --update boxes --tau 0.05",
            "nemo serve --port 8000 --llm oracle",
        ),
    ),
)


def _game_params(args: argparse.Namespace) -> dict[str, int]:
    params = {}
    for flag in ("n", "k", "a", "b", "pits_per_side", "seeds_per_pit"):
        value = getattr(args, flag, None)
        if value is not None:
            params[flag] = value
    return params


def _add_game_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("game", choices=["tictactoe", "nim", "euclid", "mancala"])
    parser.add_argument("--n", type=int, help="nim: initial pile size")
    parser.add_argument("--k", type=int, help="nim: max take per turn")
    parser.add_argument("--a", type=int, help="euclid: first pile")
    parser.add_argument("--b", type=int, help="euclid: second pile")
    parser.add_argument("--pits-per-side", dest="pits_per_side", type=int)
    parser.add_argument("--seeds-per-pit", dest="seeds_per_pit", type=int)


def _out_stream(args: argparse.Namespace):
    if getattr(args, "out", None):
        return open(args.out, "w")
    return sys.stdout


def render_state(spec: GameSpec, state: GameState) -> str:
    if spec.id == "tictactoe":
        cells = state.payload
        rows = [" ".join(cells[r * 3 + c] for c in range(3)) for r in range(3)]
        return "\n".join(rows)
    if spec.id == "nim":
        return f"pile: {state.payload} (take 1..{min(spec.config['k'], state.payload)})"
    if spec.id == "euclid":
        big, small = state.payload
        return f"piles: {big} and {small} (remove m x {small}, m in 1..{big // small if small else 0})"
    n = spec.config["pits_per_side"]
    pits = state.payload
    top = " ".join(f"{pits[i]:2d}" for i in range(2 * n, n, -1))
    bottom = " ".join(f"{pits[i]:2d}" for i in range(0, n))
    return f"   [{pits[2*n+1]:2d}] {top}\n        {bottom} [{pits[n]:2d}]"


def cmd_play(args: argparse.Namespace) -> int:
    spec = make_spec(args.game, _game_params(args))
    backend = _llm_backend(args) if args.agent.startswith("llm") else None
    agent = build_agent(spec, args.agent, llm_backend=backend)
    human_seat = PlayerId(args.human_seat)
    agent_seat = human_seat.opponent()
    import random as _random

    rng = _random.Random(args.seed)
    state = spec.initial
    moves = []
    err = sys.stderr
    err.write(f"playing {spec.id} as {human_seat.value} vs {args.agent} (seed {args.seed})\n")
    while not spec.terminal(state):
        err.write(render_state(spec, state) + "\n")
        if state.to_move is human_seat:
            legal = legal_actions(spec, state)
            err.write(f"your move {legal}: ")
            err.flush()
            line = sys.stdin.readline()
            if not line:
                err.write("input closed; resigning\n")
                return EXIT_RUNTIME
            try:
                action = int(line.strip())
            except ValueError:
                err.write(f"not a number: {line.strip()!r}\n")
                continue
            if action not in legal:
                err.write(f"illegal move {action}; choose from {legal}\n")
                continue
        else:
            action = agent.choose(state, rng)
            explain = getattr(agent, "explain", None)
            why = f"  ({explain(state)})" if explain else ""
            err.write(f"agent plays {action}{why}\n")
        from .core import Move

        moves.append(Move(state.to_move, action, spec.canonical(state)))
        state = spec.transition(state, action)
    outcome = spec.outcome(state)
    err.write(render_state(spec, state) + "\n")
    reward = outcome.reward(human_seat)
    err.write({1: "you win\n", 0: "draw\n", -1: "you lose\n"}[reward])

    from .core import GameRecord
    import hashlib

    names = {human_seat.value: {"name": "human"}, agent_seat.value: {"name": args.agent}}
    blob = json.dumps([spec.id, spec.config, args.seed, [[m.player.value, m.action, m.state_key] for m in moves]])
    record = GameRecord(
        record_id=hashlib.sha256(blob.encode()).hexdigest()[:16],
        spec_id=spec.id,
        config=dict(spec.config),
        moves=tuple(moves),
        outcome=outcome,
        agents=names,
        created_at="1970-01-01T00:00:00+00:00",
    )
    out = _out_stream(args)
    out.write(record.to_json() + "\n")
    if out is not sys.stdout:
        out.close()
        err.write(f"record written to {args.out}\n")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    spec = make_spec(args.game, _game_params(args))
    solved = solve_positions(spec, max_states=args.max_states)
    non_terminal = len(solved.non_terminal_keys())
    report = {
        "game": spec.id,
        "config": spec.config,
        "root_value": solved.value_of(spec.initial),
        "reachable_states": solved.state_count,
        "non_terminal_states": non_terminal,
        "terminal_states": solved.state_count - non_terminal,
        "root_best_action": solved.best_action[spec.canonical(spec.initial)],
    }
    if args.export:
        export_dictionary(build_dictionary(spec, max_states=args.max_states), args.export)
        report["dictionary_file"] = args.export
    out = _out_stream(args)
    out.write(json.dumps(report) + "\n")
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def _box_params(args: argparse.Namespace) -> BoxParams:
    return BoxParams(
        initial_weight=args.initial_weight,
        win_delta=args.win_delta,
        loss_delta=args.loss_delta,
        floor=args.floor,
        mastery_window=args.window,
    )


def cmd_train(args: argparse.Namespace) -> int:
    if args.game != "nim" and args.sweep:
        raise GameError("--sweep is a nim feature (sweep over pile sizes)")
    seeds = [args.seed] if args.seed is not None else list(range(args.seeds))
    configs = []
    if args.sweep:
        for n in (int(x) for x in args.sweep.split(",")):
            configs.append({"n": n, "k": args.k if args.k is not None else 3})
    else:
        configs.append(_game_params(args))
    params = _box_params(args)
    out = _out_stream(args)
    out.write("N,K,seed,L,mastered\n")
    summary = []
    for config in configs:
        spec = make_spec(args.game, config)
        solved = solve_positions(spec)
        opponent = (
            SamplingOptimalAgent(solved)
            if args.opponent == "optimal"
            else build_agent(spec, args.opponent)
        )
        rounds = []
        for seed in seeds:
            run = train(spec, opponent, params, seed=seed, max_rounds=args.max_rounds, solved=solved)
            rounds.append(run.rounds_played)
            n = spec.config.get("n", 0)
            k = spec.config.get("k", 0)
            out.write(f"{n},{k},{seed},{run.rounds_played},{int(run.mastered)}\n")
            if args.export_table and run.mastered:
                export_boxes(run.table, args.export_table)
        summary.append((config, statistics.median(rounds)))
    for config, median in summary:
        sys.stderr.write(f"config {config}: median rounds-to-mastery {median}\n")
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def cmd_loop(args: argparse.Namespace) -> int:
    spec = make_spec(args.game, _game_params(args))
    solved = solve_positions(spec)
    opponent = (
        SamplingOptimalAgent(solved) if args.opponent == "optimal" else build_agent(spec, args.opponent)
    )
    if args.update == "boxes":
        refinement = BoxesRefinement(
            spec,
            opponent,
            params=_box_params(args),
            seed=args.seed,
            cases_per_iteration=args.cases,
            seat_policy=args.seat_policy,
            solved=solved,
        )
        h0 = refinement.heuristic()
        data_source = refinement.data_source
        update = refinement.update
    else:
        agent = build_agent(spec, args.h0)
        h0 = Heuristic(id=args.h0, agent=agent)
        from .boxes import round_seed

        def data_source(k: int) -> list[EvaluationCase]:
            return [
                EvaluationCase(spec, opponent, seed=round_seed(args.seed, (k - 1) * args.cases + j + 1))
                for j in range(args.cases)
            ]

        update = identity_update
    _, history = run_training(h0, data_source, update, tau=args.tau, max_k=args.max_k)
    out = _out_stream(args)
    out.write(history.to_csv())
    if out is not sys.stdout:
        out.close()
    sys.stderr.write(
        f"stopped: {history.stopped} after {len(history.iterations)} iterations, "
        f"final loss {history.iterations[-1].loss:g}\n"
    )
    return EXIT_OK


def _llm_backend(args: argparse.Namespace):
    kind = getattr(args, "llm", None) or "oracle"
    if kind == "oracle":
        return _PerGameOracleBackend()
    if kind.startswith("replay:"):
        return ReplayBackend.from_transcript(Path(kind.split(":", 1)[1]).read_text())
    if kind == "remote":
        return RemoteBackend.from_env()
    raise GameError(f"unknown llm backend {kind!r}")


class _PerGameOracleBackend:
    """Oracle backend that builds the exact agent lazily for whichever game asks."""

    kind = "oracle"

    def __init__(self) -> None:
        self._agents: dict[str, object] = {}

    def complete(self, prompt: str, *, spec=None, state=None) -> str:
        from .exact import exact_agent

        if spec is None or state is None:
            raise GameError("oracle backend needs the live game state")
        agent = self._agents.get(spec.id)
        if agent is None:
            agent = exact_agent(spec)
            self._agents[spec.id] = agent
        return OracleBackend(agent).complete(prompt, spec=spec, state=state)


def cmd_serve(args: argparse.Namespace) -> int:
    store = RecordStore(args.store)
    backend = None
    if args.llm == "oracle":
        backend = _PerGameOracleBackend()
    elif args.llm == "remote":
        if not os.environ.get(ENV_API_KEY):
            sys.stderr.write(f"{ENV_API_KEY} not set: llm agents disabled, other agents available\n")
        else:
            backend = RemoteBackend.from_env()
    elif args.llm and args.llm.startswith("replay:"):
        backend = ReplayBackend.from_transcript(Path(args.llm.split(":", 1)[1]).read_text())
    cache = MemoCache(threshold=args.semantic_theta, semantic_enabled=args.semantic_theta < 1.0)
    service = GameService(
        store,
        llm_backend=backend,
        llm_cache=cache,
        leaderboard_path=str(Path(args.store).with_suffix(".leaderboard.json")),
    )
    static = args.static if args.static and Path(args.static).is_dir() else None
    server = GameServer(service, host=args.host, port=args.port, static_dir=static, quiet=not args.verbose)
    sys.stderr.write(f"serving on http://{args.host}:{server.port} (store: {args.store})\n")

    def _interrupt(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGINT, _interrupt)
    signal.signal(signal.SIGTERM, _interrupt)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        sys.stderr.write("shutting down; draining pending records\n")
        server.shutdown()
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    for tier in CURRICULUM:
        print(f"[{tier.tier}] {tier.summary}")
        for recipe in tier.recipes:
            print(f"  $ {recipe}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nemo", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nemo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_play = sub.add_parser("play", help="interactive terminal match")
    _add_game_flags(p_play)
    p_play.add_argument("--agent", default="exact")
    p_play.add_argument("--seed", type=int, default=0)
    p_play.add_argument("--human-seat", choices=["first", "second"], default="first")
    p_play.add_argument("--llm", help="llm backend for llm:* agents (oracle | replay:FILE | remote)")
    p_play.add_argument("--out", help="write the finished record here instead of stdout")
    p_play.set_defaults(fn=cmd_play)

    p_solve = sub.add_parser("solve", help="exact solve + state counts")
    _add_game_flags(p_solve)
    p_solve.add_argument("--export", help="write the dictionary table to this TSV file")
    p_solve.add_argument("--max-states", type=int, default=10_000_000)
    p_solve.add_argument("--out")
    p_solve.set_defaults(fn=cmd_solve)

    p_train = sub.add_parser("train", help="box-learner training sweeps (CSV per seed)")
    _add_game_flags(p_train)
    p_train.add_argument("--opponent", default="optimal", help="optimal | any agent descriptor")
    p_train.add_argument("--seeds", type=int, default=100, help="number of seeds 0..N-1")
    p_train.add_argument("--seed", type=int, help="run a single seed")
    p_train.add_argument("--sweep", help="comma list of pile sizes, e.g. 5,9,13,17,21")
    p_train.add_argument("--max-rounds", type=int, default=500)
    p_train.add_argument("--initial-weight", type=float, default=1.0)
    p_train.add_argument("--win-delta", type=float, default=1.0)
    p_train.add_argument("--loss-delta", type=float, default=-0.5)
    p_train.add_argument("--floor", type=float, default=0.05)
    p_train.add_argument("--window", type=int, default=20)
    p_train.add_argument("--export-table", help="write the last mastered box table here")
    p_train.add_argument("--out")
    p_train.set_defaults(fn=cmd_train)

    p_loop = sub.add_parser("loop", help="iterative refinement loop (history CSV)")
    _add_game_flags(p_loop)
    p_loop.add_argument("--update", choices=["identity", "boxes"], default="boxes")
    p_loop.add_argument("--h0", default="first-legal", help="identity update: starting heuristic descriptor")
    p_loop.add_argument("--opponent", default="optimal")
    p_loop.add_argument("--tau", type=float, default=0.05)
    p_loop.add_argument("--max-k", type=int, default=1000)
    p_loop.add_argument("--seed", type=int, default=0)
    p_loop.add_argument("--cases", type=int, default=8, help="evaluation cases per iteration")
    p_loop.add_argument("--seat-policy", choices=["alternate", "winning"], default="winning")
    p_loop.add_argument("--initial-weight", type=float, default=1.0)
    p_loop.add_argument("--win-delta", type=float, default=1.0)
    p_loop.add_argument("--loss-delta", type=float, default=-0.5)
    p_loop.add_argument("--floor", type=float, default=0.05)
    p_loop.add_argument("--window", type=int, default=20)
    p_loop.add_argument("--out")
    p_loop.set_defaults(fn=cmd_loop)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--store", default="records.jsonl")
    p_serve.add_argument("--static", help="serve this directory at / (the web playground build)")
    p_serve.add_argument("--llm", default="oracle", help="oracle | replay:FILE | remote")
    p_serve.add_argument("--semantic-theta", type=float, default=1.0)
    p_serve.add_argument("--verbose", action="store_true")
    p_serve.set_defaults(fn=cmd_serve)

    p_presets = sub.add_parser("presets", help="print the tiered curriculum recipes")
    p_presets.set_defaults(fn=cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except StateSpaceTooLarge as exc:
        sys.stderr.write(f"state space too large: {exc}\n")
        return EXIT_RUNTIME
    except (GameError, UnknownAgent, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
