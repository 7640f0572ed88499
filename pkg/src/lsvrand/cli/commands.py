"""
CLI commands for lsvrand.
"""

import argparse
import logging
import sys
from typing import List, Optional

from ..core.pipeline import ExperimentRunner, read_config, resolve_output_dir, validate_config
from ..errors import ConfigurationError, LsvError
from ..reporting.summary import generate_report

RUN_COMMANDS = [
    "env-sample",
    "orbit",
    "return-tails",
    "ulam",
    "density",
    "decay",
    "corr",
    "variance",
    "clt",
    "moments",
    "martingale-check",
    "coupling",
    "annealed",
]
COMMANDS = RUN_COMMANDS + ["report", "validate"]


def _seed(value: str) -> int:
    seed = int(value, 0)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments for lsvrand."""
    parser = argparse.ArgumentParser(
        description=(
            "Random LSV map experiments: transfer operators, Monte Carlo and coupling tails."
        )
    )
    parser.add_argument("command", choices=COMMANDS, help="Subcommand to run")
    parser.add_argument("--config", required=False, help="Experiment config (TOML)")
    parser.add_argument("--out", required=False, help="Output directory")
    parser.add_argument("--seed", type=_seed, required=False, help="Override mc.seed")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads")
    parser.add_argument(
        "--check", action="store_true", help="Fail with exit code 5 on acceptance failures"
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level",
    )
    return parser.parse_args(argv)


def run(args: argparse.Namespace) -> int:
    """Execute one parsed command line; returns the exit status."""
    if args.command == "report":
        config = read_config(args.config)[0] if args.config else None
        output_dir = resolve_output_dir(config, args.out)
        print("\n--- Starting Report ---\n")
        generate_report(output_dir, check=args.check)
        print("\n--- Report Complete ---\n")
        return 0

    if args.config is None:
        raise ConfigurationError(f"'{args.command}' needs --config")
    config, config_hash = read_config(args.config)

    if args.command == "validate":
        diagnostics = validate_config(config)
        for diagnostic in diagnostics:
            print(f"{diagnostic.level}: {diagnostic.message}")
        return 0

    runner = ExperimentRunner(
        config,
        config_hash,
        config_path=args.config,
        output_dir=args.out,
        seed=args.seed,
        threads=args.threads,
        check=args.check,
    )
    runner.run(args.command)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the lsvrand CLI."""
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(args)
    except LsvError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
