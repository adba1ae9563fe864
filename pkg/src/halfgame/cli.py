"""Command-line interface: single games, bias sweeps, exact equivalence
tests, graph verification, and random-graph diagnostics.

Exit codes: 0 on success, 1 when an exact computation is refused by a size
guard, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .board import BreakerMode, Game, GameConfig, ScopeError, StopPolicy
from .harness import (
    bias_sweep,
    equivalence_test,
    breaker_property_diagnostics,
    parse_bias_grid,
    play_one,
    trivial_bound,
    write_sweep_csv,
)
from . import verify


def _workers_default() -> int:
    env = os.environ.get("HALFGAME_WORKERS")
    return int(env) if env else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfgame",
        description=(
            "Biased Maker-Breaker games on the complete graph with a random "
            "Breaker: play single games, sweep the bias, and verify results."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="play one game and print its record")
    play.add_argument("--game", choices=[g.value for g in Game], required=True)
    play.add_argument("--n", type=int, required=True)
    play.add_argument("--bias", type=int, required=True)
    play.add_argument("--epsilon", type=float, default=0.45)
    play.add_argument("--seed", type=int, default=0)
    play.add_argument(
        "--breaker", choices=[m.value for m in BreakerMode], default="uniform"
    )
    play.add_argument(
        "--stop-policy", choices=[p.value for p in StopPolicy], default="goal"
    )
    play.add_argument(
        "--dump-moves", metavar="PATH",
        help="also write the play sequence as u-v:owner lines",
    )
    play.add_argument(
        "--dump-permutation", metavar="PATH",
        help="with --breaker perm, write Breaker's edge order as u-v lines",
    )

    sweep = sub.add_parser("sweep", help="win rate over a bias grid")
    sweep.add_argument("--game", choices=[g.value for g in Game], required=True)
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--epsilon", type=float, default=0.45)
    sweep.add_argument(
        "--bias-grid", required=True,
        help="start:stop:step (inclusive of stop when it is on the lattice)",
    )
    sweep.add_argument("--trials", type=int, required=True)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", required=True, help="CSV output path")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument(
        "--breaker", choices=[m.value for m in BreakerMode], default="uniform"
    )

    equiv = sub.add_parser(
        "equiv",
        help="exact TV distance between uniform and permutation Breaker",
    )
    equiv.add_argument("--n", type=int, required=True)
    equiv.add_argument("--bias", type=int, required=True)
    equiv.add_argument(
        "--rounds", type=int, default=None, help="default: full game"
    )

    ver = sub.add_parser("verify", help="run checkers on a graph file")
    ver.add_argument("--n", type=int, required=True)
    ver.add_argument(
        "--edges", required=True, help="text file with one 'u v' pair per line"
    )
    ver.add_argument(
        "--cycle",
        help="optional file with a claimed Hamilton cycle, one vertex per line",
    )
    ver.add_argument("--kset", type=int, default=None)
    ver.add_argument(
        "--bipartite", type=int, nargs=2, metavar=("R", "Q"), default=None
    )

    diag = sub.add_parser(
        "diag", help="random-graph property diagnostics on Breaker's graph"
    )
    diag.add_argument("--n-list", default="20,30,40")
    diag.add_argument("--epsilon", type=float, default=0.45)
    diag.add_argument("--trials", type=int, default=50)
    diag.add_argument("--seed", type=int, default=0)
    diag.add_argument("--bias", type=int, default=None)

    bound = sub.add_parser(
        "bound", help="print the trivial bias bound for a game"
    )
    bound.add_argument("--game", choices=[g.value for g in Game], required=True)
    bound.add_argument("--n", type=int, required=True)
    return parser


def _cmd_play(args) -> int:
    cfg = GameConfig(
        n=args.n,
        bias=args.bias,
        game=Game(args.game),
        breaker_mode=BreakerMode(args.breaker),
        seed=args.seed,
        stop_policy=StopPolicy(args.stop_policy),
    )
    if args.dump_permutation and cfg.breaker_mode is not BreakerMode.PERM:
        raise ValueError("--dump-permutation requires --breaker perm")
    record_sequence = args.dump_moves is not None
    if args.dump_permutation:
        import random

        from .board import edge_endpoints, run_game
        from .harness import make_breaker, make_maker

        maker = make_maker(cfg.game, cfg.n, args.epsilon)
        breaker = make_breaker(cfg.breaker_mode)
        record = run_game(
            cfg, maker, breaker, random.Random(cfg.seed),
            record_sequence=record_sequence,
        )
        with open(args.dump_permutation, "w", encoding="utf-8") as fh:
            for e in breaker.state.sigma:
                u, v = edge_endpoints(e, cfg.n)
                fh.write(f"{u}-{v}\n")
    else:
        record = play_one(cfg, args.epsilon, record_sequence=record_sequence)
    out = {
        "config": {
            "game": cfg.game.value,
            "n": cfg.n,
            "bias": cfg.bias,
            "epsilon": args.epsilon,
            "seed": cfg.seed,
            "breakerMode": cfg.breaker_mode.value,
            "stopPolicy": cfg.stop_policy.value,
        },
    }
    out.update(record.to_json_dict())
    print(json.dumps(out))
    if args.dump_moves:
        from .board import edge_endpoints

        lines = []
        for e, owner in record.play_sequence:
            u, v = edge_endpoints(e, cfg.n)
            lines.append(f"{u}-{v}:{'maker' if owner == 1 else 'breaker'}")
        with open(args.dump_moves, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    workers = args.workers if args.workers is not None else _workers_default()
    grid = parse_bias_grid(args.bias_grid)
    sweep = bias_sweep(
        Game(args.game),
        args.n,
        args.epsilon,
        grid,
        args.trials,
        args.seed,
        workers=workers,
        breaker_mode=BreakerMode(args.breaker),
    )
    sidecar = write_sweep_csv(args.out, sweep)
    echo = sweep.to_json_dict()
    del echo["stats"]
    print(json.dumps({"csv": args.out, "sidecar": sidecar, **echo}))
    if sweep.non_monotone:
        print("warning: empirical win rates are not monotone beyond noise",
              file=sys.stderr)
    return 0


def _cmd_equiv(args) -> int:
    tv = equivalence_test(args.n, args.bias, rounds=args.rounds)
    print(f"TV={float(tv):.6f}")
    return 0


def _read_graph(path: str, n: int) -> verify.SimpleGraph:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, v = line.split()
            pairs.append((int(u), int(v)))
    return verify.SimpleGraph.from_pairs(n, pairs)


def _cmd_verify(args) -> int:
    g = _read_graph(args.edges, args.n)
    out = {
        "n": g.n,
        "edges": len(g.edges),
        "connected": verify.is_connected(g),
        "minDegree": verify.min_degree(g),
        "maxDegree": verify.max_degree(g),
    }
    if g.n % 2 == 0:
        out["perfectMatching"] = verify.is_perfect_matching(g)
    if args.cycle:
        with open(args.cycle, encoding="utf-8") as fh:
            cycle = [int(line.strip()) for line in fh if line.strip()]
        out["hamiltonian"] = verify.is_hamiltonian_cycle(g, cycle)
        out["certificate"] = True
    else:
        out["certificate"] = False
        try:
            out["hamiltonian"] = verify.is_hamiltonian(g)
        except ScopeError as exc:
            # keep the other verdicts usable on big graphs
            out["hamiltonian"] = None
            out["hamiltonianNote"] = str(exc)
    if args.kset is not None:
        out["denseKSet"] = verify.has_dense_kset(g, args.kset)
    if args.bipartite is not None:
        r, q = args.bipartite
        out["completeBipartite"] = verify.has_complete_bipartite(g, r, q)
    print(json.dumps(out))
    return 0


def _cmd_diag(args) -> int:
    rows = []
    for n_text in args.n_list.split(","):
        rows.append(
            breaker_property_diagnostics(
                int(n_text), args.epsilon, args.trials, args.seed, bias=args.bias
            )
        )
    print(json.dumps(rows, indent=2))
    return 0


def _cmd_bound(args) -> int:
    print(trivial_bound(Game(args.game), args.n))
    return 0


_COMMANDS = {
    "play": _cmd_play,
    "sweep": _cmd_sweep,
    "equiv": _cmd_equiv,
    "verify": _cmd_verify,
    "diag": _cmd_diag,
    "bound": _cmd_bound,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScopeError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
