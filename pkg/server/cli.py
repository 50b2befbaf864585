"""qgames command-line interface.

Subcommands:
    analyze   JSON report for one game at one X
    sweep     CSV of equilibrium payoffs over X
    verify    engine / closed-form / Nash checks, exit 1 on any failure
    families  CSV comparing the Chicken, Leader and Secret Meeting exemplars
    pd        Prisoner's Dilemma ranking report over X

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 domain error,
4 I/O error.
"""

import sys
import json
import argparse
import logging
from typing import List, Optional

from server.analysis import pd_exploration
from server.config import Settings, configure_logging, load_config, load_settings
from server.errors import DomainError, GameDefinitionError, GameError, OutputError
from server.games import GameFamily, PayoffMatrix, load_game_file, normalized_exemplar
from server.oracle import verify_game
from server.reports import SCHEMA_VERSION, analyze_report, families_table, sweep_table, write_atomic, x_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_DOMAIN_ERROR = 3
EXIT_IO_ERROR = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgames",
        description="Equilibria of quantized symmetric 2x2 games as a function of entanglement.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="JSON analysis report for one game at one X")
    analyze.add_argument("--game", required=True, help="Path to a JSON game definition")
    analyze.add_argument("--x", type=float, required=True, help="Entanglement |alpha|^2 in [0, 1]")
    analyze.add_argument("--grid", type=int, default=1001, help="Deviation grid size (default: 1001)")
    analyze.add_argument("--tol", type=float, help="Tolerance (default: QGAMES_TOLERANCE)")

    sweep = sub.add_parser("sweep", help="CSV of equilibrium payoffs over X")
    sweep.add_argument("--game", required=True, help="Path to a JSON game definition")
    sweep.add_argument("--resolution", type=int, help="Number of X intervals (default: QGAMES_SWEEP_RESOLUTION)")
    sweep.add_argument("--tol", type=float, help="Tolerance (default: QGAMES_TOLERANCE)")
    sweep.add_argument("--out", help="Output CSV path (default: standard output)")

    verify = sub.add_parser("verify", help="Check closed forms and equilibria against the density-matrix engine")
    verify.add_argument("--game", required=True, help="Path to a JSON game definition")
    verify.add_argument("--x", type=float, required=True, help="Entanglement |alpha|^2 in [0, 1]")
    verify.add_argument("--grid", type=int, help="Grid size (default: QGAMES_VERIFY_GRID)")
    verify.add_argument("--tol", type=float, help="Tolerance (default: QGAMES_TOLERANCE)")

    families = sub.add_parser("families", help="CSV comparing Chicken, Leader and Secret Meeting")
    families.add_argument("--resolution", type=int, help="Number of X intervals (default: QGAMES_FAMILY_GRID)")
    families.add_argument("--out", help="Output CSV path (default: standard output)")

    pd = sub.add_parser("pd", help="Rank Prisoner's Dilemma equilibria over X")
    pd.add_argument("--game", help="Path to a JSON game definition (default: normalised exemplar)")
    pd.add_argument("--resolution", type=int, default=20, help="Number of X intervals (default: 20)")

    return parser


def _emit_json(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _emit_csv(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    game = load_game_file(args.game)
    tol = args.tol if args.tol is not None else settings.tolerance
    _emit_json(analyze_report(game.matrix, args.x, name=game.name, grid_n=args.grid, tol=tol))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    game = load_game_file(args.game)
    resolution = args.resolution if args.resolution is not None else settings.sweep_resolution
    tol = args.tol if args.tol is not None else settings.tolerance
    _emit_csv(sweep_table(game.matrix, resolution, tol).to_csv(), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    game = load_game_file(args.game)
    grid_n = args.grid if args.grid is not None else settings.verify_grid
    tol = args.tol if args.tol is not None else settings.tolerance

    result = verify_game(game.matrix, args.x, grid_n, tol)
    _emit_json({"schema_version": SCHEMA_VERSION, "family": game.family.value, **result.as_dict()})
    return EXIT_OK if result.passed else EXIT_VERIFICATION_FAILED


def cmd_families(args: argparse.Namespace, settings: Settings) -> int:
    resolution = args.resolution if args.resolution is not None else settings.family_grid
    _emit_csv(families_table(resolution).to_csv(), args.out)
    return EXIT_OK


def cmd_pd(args: argparse.Namespace, settings: Settings) -> int:
    if args.game:
        matrix: PayoffMatrix = load_game_file(args.game).matrix
    else:
        matrix = normalized_exemplar(GameFamily.PRISONERS_DILEMMA)
    report = pd_exploration(matrix, x_grid(args.resolution))
    _emit_json({"schema_version": SCHEMA_VERSION, "game": matrix.as_dict(), **report.as_dict()})
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "families": cmd_families,
    "pd": cmd_pd,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the qgames script; returns the process exit code."""
    args = build_parser().parse_args(argv)

    try:
        config_path = load_config()
        settings = load_settings()
    except DomainError as e:
        print(f"qgames: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR

    configure_logging("DEBUG" if args.verbose else settings.log_level)
    if config_path:
        logger.info("Loaded configuration from: %s", config_path)

    try:
        return COMMANDS[args.command](args, settings)
    except GameDefinitionError as e:
        print(f"qgames: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except DomainError as e:
        print(f"qgames: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except OutputError as e:
        print(f"qgames: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    except GameError as e:
        logger.error("Unexpected game error: %s", e)
        print(f"qgames: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
