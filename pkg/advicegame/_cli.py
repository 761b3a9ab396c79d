"""Command-line interface: ``advicegame <command> [options]``.

Exit codes: 0 success, 1 negative certification verdict, 2 invalid input
or usage, 3 file not found or not writable, 4 internal failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import advicegame._error as advicegame_error
from advicegame._client import AdviceGame
from advicegame._version import __version__
from advicegame.resources import (
    AdviceSource,
    CorrelatedStrategy,
    Player,
    ScanFormat,
    UtilityTable,
    ns_vertices,
)
from advicegame.resources._model import BaseModel
from advicegame.resources._strategy import PURE_STRATEGIES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _emit(payload: Any) -> None:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json", by_alias=True)
    print(json.dumps(payload, indent=2))


def _load_strategy(path: str) -> CorrelatedStrategy:
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as ex:
            raise advicegame_error.AdviceGameValueError(
                f"{path} is not valid JSON: {ex}"
            )
    if isinstance(raw, list):
        raw = {"p": raw}
    return CorrelatedStrategy.model_validate(raw)


def _render_game(game: UtilityTable) -> str:
    parts = []
    for player in Player:
        parts.append(f"u_{player.value}")
        parts.append(game.to_df(player).to_string(float_format=_fmt))
    return "\n".join(parts)


def cmd_table(client: AdviceGame, args: argparse.Namespace) -> int:
    if args.json:
        _emit(client.game.to_json())
    else:
        print(_render_game(client.utilities))
    return EXIT_OK


def cmd_equilibria(client: AdviceGame, args: argparse.Namespace) -> int:
    if args.equilibrium_class == "pure":
        table = client.pure.records()
        nash = table[table["nash"]]
        names = [
            f"({a},{b})" for a, b in zip(nash["alice_strategy"], nash["bob_strategy"])
        ]
        if args.json:
            _emit({"equilibria": names, "table": table.to_dict(orient="records")})
        else:
            print("pure Nash equilibria: " + ", ".join(names))
            print(table.to_string(index=False, float_format=_fmt))
        return EXIT_OK

    maxima = {
        player.value: client.correlated.max_payoff(player) for player in Player
    }
    if args.json:
        _emit({name: m.model_dump(mode="json") for name, m in maxima.items()})
    else:
        labels = [s.label for s in PURE_STRATEGIES]
        for name, maximum in maxima.items():
            print(f"best correlated equilibrium for {name}: {_fmt(maximum.value)}")
            rows = [
                "  " + labels[i] + " " + " ".join(_fmt(v) for v in maximum.witness.p[i])
                for i in range(4)
            ]
            print("\n".join(rows))
    return EXIT_OK


def cmd_bound(client: AdviceGame, args: argparse.Namespace) -> int:
    # the closed-form bounds reject games outside the family
    bounds = client.correlated.bounds()
    epsilon = client.utilities.epsilon
    alice = client.correlated.max_payoff(Player.ALICE)
    bob = client.correlated.max_payoff(Player.BOB)
    if 0.25 <= epsilon <= 0.5:
        exclusion: Optional[bool] = client.correlated.identity_exclusion()
        tightened: Optional[float] = client.correlated.tightened_alice_bound()
    else:
        exclusion, tightened = None, None
    result: Dict[str, Any] = {
        "epsilon": epsilon,
        "bound_alice": bounds.alice_bound,
        "bound_bob": bounds.bob_bound,
        "regime": bounds.regime.value,
        "ce_alice_lp": alice.value,
        "ce_bob_lp": bob.value,
        "tightened_alice_bound": tightened,
        "bob_never_plays_s3": exclusion,
    }
    if args.json:
        _emit(result)
    else:
        for key, value in result.items():
            if isinstance(value, float):
                value = _fmt(value)
            print(f"{key:<24}{'n/a' if value is None else value}")
    return EXIT_OK


def cmd_certify(client: AdviceGame, args: argparse.Namespace) -> int:
    epsilon = client.utilities.epsilon
    if args.advice == "pr":
        payoffs = client.nosignaling.pr_star_payoffs()
        report = client.nosignaling.certify()
        extra: Dict[str, Any] = {}
    else:
        payoffs = client.quantum.payoffs()
        report = client.quantum.certify()
        extra = {
            "alice_best_response": client.quantum.best_response(Player.ALICE).value,
            "bob_best_response": client.quantum.best_response(Player.BOB).value,
        }
        if epsilon is not None:
            window = client.quantum.window()
            extra["advantage_window"] = [window.c1, window.c2]
            extra["in_advantage_window"] = window.contains(epsilon)
    result = {
        "epsilon": epsilon,
        "advice": args.advice,
        "payoffs": payoffs.model_dump(),
        "report": report.model_dump(),
        **extra,
    }
    if args.json:
        _emit(result)
    else:
        where = "the loaded game" if epsilon is None else f"epsilon={_fmt(epsilon)}"
        print(f"{args.advice} advice on {where}")
        print(f"payoffs: alice {_fmt(payoffs.alice)}, bob {_fmt(payoffs.bob)}")
        print(f"gains:   alice {_fmt(report.alice_gain)}, bob {_fmt(report.bob_gain)}")
        for key, value in extra.items():
            if isinstance(value, list):
                value = "[" + ", ".join(_fmt(v) for v in value) + "]"
            elif isinstance(value, float):
                value = _fmt(value)
            print(f"{key}: {value}")
        if report.best_alice_deviation:
            print(f"alice deviates to {report.best_alice_deviation}")
        if report.best_bob_deviation:
            print(f"bob deviates to {report.best_bob_deviation}")
        print("Nash equilibrium" if report.is_equilibrium else "not a Nash equilibrium")
    return EXIT_OK if report.is_equilibrium else EXIT_NEGATIVE


def cmd_simulate(client: AdviceGame, args: argparse.Namespace) -> int:
    if args.advice == "classical":
        if args.strategy_file is None:
            raise advicegame_error.AdviceGameValueError(
                "classical advice needs --strategy-file with a 4x4 recommendation matrix"
            )
        source = AdviceSource.classical(
            client._call(_load_strategy, args.strategy_file)
        )
    elif args.advice == "pr":
        source = AdviceSource.pr()
    else:
        source = AdviceSource.quantum()
    report = client.simulation.run(
        source, rounds=args.rounds, seed=args.seed, progress=args.progress
    )
    if args.json:
        _emit(report)
    else:
        print(f"{args.advice} advice, {report.rounds} rounds, seed {report.seed}")
        for name in ("empirical", "analytic", "abs_error"):
            pair = getattr(report, name)
            print(f"{name:<10} alice {_fmt(pair.alice)}, bob {_fmt(pair.bob)}")
    return EXIT_OK


def cmd_vertices(client: AdviceGame, args: argparse.Namespace) -> int:
    _emit(
        [
            {
                "kind": vertex.kind.value,
                "index": vertex.index,
                "label": vertex.label,
                "p": vertex.correlation.p.tolist(),
            }
            for vertex in ns_vertices()
        ]
    )
    return EXIT_OK


def cmd_scan(client: AdviceGame, args: argparse.Namespace) -> int:
    rows = client.scan.run(args.start, args.stop, args.step, progress=args.progress)
    client.scan.write(rows, args.out, ScanFormat(args.format))
    if not args.json:
        print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="print machine-readable JSON"
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more (-v info, -vv debug)",
    )
    common.add_argument("--progress", action="store_true", help="show progress bars")
    common.add_argument(
        "--game-file", default=None, help="JSON game file to use instead of the family"
    )
    common.add_argument(
        "--epsilon",
        type=float,
        default=None,
        help="family parameter in [0, 0.75] (default: $ADVICEGAME_EPSILON or 0)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advicegame",
        description=(
            "Analyse conflicting-interest Bayesian games under classical, "
            "no-signaling and entangled advice."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser(
        "table", parents=[common], help="print the utility tables"
    )
    table.set_defaults(handler=cmd_table)

    equilibria = commands.add_parser(
        "equilibria", parents=[common], help="list equilibria"
    )
    equilibria.add_argument(
        "--class",
        dest="equilibrium_class",
        choices=["pure", "correlated"],
        default="pure",
        help="pure Nash equilibria or payoff-maximizing correlated equilibria",
    )
    equilibria.set_defaults(handler=cmd_equilibria)

    bound = commands.add_parser(
        "bound", parents=[common], help="classical payoff bounds and LP maxima"
    )
    bound.set_defaults(handler=cmd_bound)

    certify = commands.add_parser(
        "certify", parents=[common], help="certify PR-box or entangled advice"
    )
    certify.add_argument("--advice", choices=["pr", "quantum"], required=True)
    certify.set_defaults(handler=cmd_certify)

    simulate = commands.add_parser(
        "simulate", parents=[common], help="Monte Carlo play"
    )
    simulate.add_argument(
        "--advice", choices=["classical", "pr", "quantum"], required=True
    )
    simulate.add_argument("--rounds", type=int, default=1_000_000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument(
        "--strategy-file", default=None, help="JSON 4x4 recommendation matrix"
    )
    simulate.set_defaults(handler=cmd_simulate)

    vertices = commands.add_parser(
        "vertices", parents=[common], help="dump the no-signaling vertices as JSON"
    )
    vertices.set_defaults(handler=cmd_vertices)

    scan = commands.add_parser(
        "scan", parents=[common], help="tabulate results over a range of epsilon"
    )
    scan.add_argument("--from", dest="start", type=float, default=0.0)
    scan.add_argument("--to", dest="stop", type=float, default=0.75)
    scan.add_argument("--step", type=float, default=0.01)
    scan.add_argument("--out", required=True)
    scan.add_argument("--format", choices=[f.value for f in ScanFormat], default="csv")
    scan.set_defaults(handler=cmd_scan)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    handler: Callable[[AdviceGame, argparse.Namespace], int] = args.handler
    try:
        client = AdviceGame(epsilon=args.epsilon, game_file=args.game_file)
        return handler(client, args)
    except advicegame_error.AdviceGameValueError as ex:
        print(f"advicegame: error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except (
        advicegame_error.AdviceGameNotFoundError,
        advicegame_error.AdviceGamePermissionError,
        advicegame_error.AdviceGameIOError,
    ) as ex:
        print(f"advicegame: error: {ex}", file=sys.stderr)
        return EXIT_IO
    except advicegame_error.AdviceGameError as ex:
        logger.debug("internal failure details: %s", ex.details)
        print(f"advicegame: internal error: {ex}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as ex:
        logger.debug("unexpected failure", exc_info=True)
        print(f"advicegame: internal error: {ex!r}", file=sys.stderr)
        return EXIT_INTERNAL
