"""
Command-line entry point.

    szego run|folner|bergman|det --config <path> [--out <dir>] [--seed <u64>]
          [--max-rank <int>] [--verbose] [key=value ...]

Exit codes: 0 when every enabled invariant passed, 1 when one failed,
otherwise the code of the error that stopped the run (see src/errors.py).
"""
import argparse
import logging
import sys
from typing import List, Optional

from src import __version__
from src.errors import InvariantFailure, SzegoError
from src.experiments import EXPERIMENTS, load_experiment_config, run_experiment

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szego", description="Szegő limit experiments for truncated Toeplitz-like operators"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(EXPERIMENTS), help="Experiment suite to run")
    parser.add_argument("--config", type=str, default=None, help="Experiment config (YAML or JSON)")
    parser.add_argument("--out", type=str, default=None, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="64-bit Monte Carlo seed")
    parser.add_argument("--max-rank", type=int, default=None, help="Largest truncation rank allowed")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("overrides", nargs="*", help="Extra key=value config overrides")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    # flags and key=value overrides may be interleaved
    args = build_parser().parse_intermixed_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s [Szego] %(message)s',
    )
    try:
        cfg = load_experiment_config(
            args.command, args.config, args.overrides, args.out, args.seed, args.max_rank
        )
        result = run_experiment(cfg)
    except SzegoError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    if not result.passed:
        logger.error(f"Invariants failed: {', '.join(result.failures)} (see {result.verdict_path})")
        return InvariantFailure.exit_code
    logger.info(f"All invariants passed; reports in {result.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
