"""Command line entry point: hexstrat eval | play | replay."""

from __future__ import annotations

import argparse
import json
import sys

from ..replay import load_replay
from .evaluate import EvalConfig, run_eval, summarize


def _add_eval(sub):
    p = sub.add_parser("eval", help="run a batch of games and report scores")
    p.add_argument("--blue", default="pass_agg",
                   help="blue policy: model name, 'multimodel', 'hrl', or a .json config")
    p.add_argument("--red", default="pass_agg", help="red policy (same forms)")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--scenario-cycle", type=int, default=0,
                   help="0 = fresh scenario per game; k = cycle k cached scenarios")
    p.add_argument("--scenario-seed", type=int, default=0)
    p.add_argument("--board", type=int, default=10, help="board side length")
    p.add_argument("--deterministic", action="store_true", default=True)
    p.add_argument("--stochastic", dest="deterministic", action="store_false")
    p.add_argument("--out", default=None, help="per-game CSV output path")


def _add_play(sub):
    p = sub.add_parser("play", help="serve the HTTP/WebSocket play API")
    p.add_argument("--serve", default=":8080", help="[host]:port to bind")
    p.add_argument("--red", default="pass_agg", help="AI opponent model")
    p.add_argument("--replay-dir", default=None)


def _add_replay(sub):
    p = sub.add_parser("replay", help="summarize a replay JSONL file")
    p.add_argument("file")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="hexstrat")
    sub = ap.add_subparsers(dest="command", required=True)
    _add_eval(sub)
    _add_play(sub)
    _add_replay(sub)
    args = ap.parse_args(argv)

    if args.command == "eval":
        report = run_eval(
            EvalConfig(
                blue=args.blue,
                red=args.red,
                games=args.games,
                seed=args.scenario_seed,
                cycle=args.scenario_cycle,
                board_length=args.board,
                deterministic=args.deterministic,
                out_csv=args.out,
            )
        )
        print(summarize(report))
        return 0

    if args.command == "play":
        from .server import serve

        host, _, port = args.serve.rpartition(":")
        serve(host or "127.0.0.1", int(port), args.replay_dir)
        return 0

    if args.command == "replay":
        header, records = load_replay(args.file)
        steps = [r for r in records if r.get("kind") == "step"]
        end = next((r for r in records if r.get("kind") == "end"), None)
        print(json.dumps({
            "scenario_seed": header["scenario"].get("seed"),
            "dims": header["scenario"].get("dims"),
            "steps": len(steps),
            "final_score": end["score"] if end else (
                steps[-1]["score"]["total"] if steps else 0.0
            ),
            "phases": end["phases"] if end else (steps[-1]["phase"] if steps else 0),
        }, indent=2))
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
