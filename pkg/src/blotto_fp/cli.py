"""Command-line front end: load a game config, run the solver, write traces.

Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources

from .engine import RunOptions, run
from .game import (
    Allocation,
    ConditionalAllocation,
    Game,
    GameValidationError,
    History,
    validate_game,
)

TRACE_COLUMNS = ["iteration", "elapsed_seconds", "eps1", "eps2", "eps", "v1"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class ConfigError(Exception):
    pass


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def bundled_config_path():
    """Path to the shipped three-battlefield asymmetric-information instance."""
    return resources.files("blotto_fp").joinpath("data/blotto3.json")


def load_config(path) -> Game:
    """Read and validate a JSON game description."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    try:
        return validate_game(raw)
    except GameValidationError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc


def _fmt(x: float) -> str:
    return format(x, ".17g")


def dump_strategies(game: Game, history: History, path):
    """Serialize both strategy arrays plus the game they were computed for."""
    payload = {
        "game": {
            "battlefield_values": game.battlefield_values.tolist(),
            "outcomes": game.outcomes.tolist(),
            "outcome_probs": game.outcome_probs.tolist(),
            "budget_p1": game.budget1,
            "budget_p2": game.budget2,
            "delta": game.delta,
        },
        "player1": history.stacked1().tolist(),
        "player2": history.stacked2().tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_strategies(path):
    """Inverse of :func:`dump_strategies`; revalidates everything."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    game = validate_game(payload["game"])
    entries1 = [Allocation(row, game.budget1) for row in payload["player1"]]
    entries2 = [ConditionalAllocation(mat, game.budget2) for mat in payload["player2"]]
    return game, History(entries1, entries2)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def build_parser() -> _Parser:
    parser = _Parser(prog="blotto-fp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="run fictitious play on a game config")
    solve.add_argument("--config", default=None, help="game config JSON (default: bundled blotto3.json)")
    solve.add_argument("--iters", type=_positive_int, default=5000)
    solve.add_argument("--report-every", type=_positive_int, default=10)
    solve.add_argument("--out", default=None, help="convergence trace CSV path")
    solve.add_argument("--strategies-out", default=None, help="strategy dump JSON path")
    solve.add_argument("--mode", choices=["wins", "utility"], default="wins")
    solve.add_argument("--sample-k", type=_positive_int, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--init", choices=["uniform", "random"], default="uniform")
    return parser


def solve_command(args) -> int:
    config_path = args.config if args.config is not None else bundled_config_path()
    game = load_config(config_path)
    options = RunOptions(
        iterations=args.iters,
        report_every=args.report_every,
        init_mode=args.init,
        seed=args.seed,
        sample_k=args.sample_k,
        br_mode=args.mode,
    )

    out_fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else None
    try:
        writer = None
        if out_fh is not None:
            writer = csv.writer(out_fh)
            writer.writerow(TRACE_COLUMNS)
            out_fh.flush()

        last = {}

        def sink(rec):
            last["rec"] = rec
            if writer is not None:
                writer.writerow(
                    [rec.iteration]
                    + [_fmt(v) for v in (rec.elapsed_seconds, rec.eps1, rec.eps2, rec.eps, rec.v_star1)]
                )
                out_fh.flush()

        state = run(game, options, sink)
    finally:
        if out_fh is not None:
            out_fh.close()

    if args.strategies_out:
        dump_strategies(game, state.history(game), args.strategies_out)

    rec = last["rec"]
    print(
        f"iterations={rec.iteration} eps={_fmt(rec.eps)} "
        f"eps1={_fmt(rec.eps1)} eps2={_fmt(rec.eps2)} "
        f"v1={_fmt(rec.v_star1)} elapsed_seconds={rec.elapsed_seconds:.3f}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "solve":
            return solve_command(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
