"""CLI entry point for LTC Prune."""

import argparse
import logging
import sys
from typing import Optional, Sequence

from rich.logging import RichHandler

from . import __version__
from .commands import COMMANDS, console
from .config import settings
from .schemas import TESTBEDS


def setup_logging(verbose: bool = False) -> None:
    level = logging.getLevelName(settings.log_level)
    if verbose:
        level = logging.DEBUG
    elif not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False, console=console)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltc-prune",
        description="Causality-guided sensor pruning for liquid time-constant observers",
    )
    parser.add_argument("--version", action="version", version=f"ltc-prune {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config or run manifest JSON")
    common.add_argument("--out", help=f"Output directory (default {settings.output_root})")
    common.add_argument("-v", "--verbose", action="store_true", help="Verbose logging")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="Simulate a testbed and write its dataset")
    p.add_argument("--testbed", required=True, choices=TESTBEDS)
    p.add_argument("--seed", type=int, help="Override simulation and training seeds")

    p = sub.add_parser("train", parents=[common], help="Train observers with multi-seed selection")
    p.add_argument("--dataset", required=True, help="Dataset CSV")
    p.add_argument("--channels", help="Comma-separated channel names (default: all)")
    p.add_argument("--seed", type=int, help="Base training seed")

    p = sub.add_parser("analyze", parents=[common], help="Causality scores of a trained model")
    p.add_argument("--model", required=True, help="Model JSON")
    p.add_argument("--dataset", required=True, help="Dataset CSV")
    p.add_argument("--segment", choices=("train", "val", "test"), help="Segment to perturb")

    p = sub.add_parser("prune", parents=[common], help="Run the iterative pruning loop")
    p.add_argument("--dataset", required=True, help="Dataset CSV")
    p.add_argument("--seed", type=int, help="Base training seed")
    p.add_argument("--max-iters", type=int, dest="max_iters", help="Iteration cap")
    p.add_argument("--segment", choices=("train", "val", "test"), help="Segment used for causality")

    p = sub.add_parser("evaluate", parents=[common], help="Metrics and predictions on one segment")
    p.add_argument("--model", required=True, help="Model JSON")
    p.add_argument("--dataset", required=True, help="Dataset CSV")
    p.add_argument("--segment", choices=("train", "val", "test"), help="Segment (default test)")

    sub.add_parser("report", parents=[common], help="Re-render summary and charts of a run directory")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    for problem in settings.validate():
        logging.getLogger(__name__).warning(problem)

    sys.exit(COMMANDS[args.command](args))


if __name__ == "__main__":
    main()
