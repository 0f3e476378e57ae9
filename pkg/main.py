"""
Main entry point for countcompat.

Usage:
    python main.py classify --config spec.cfg
    python main.py build --config family.cfg --trunc 40 --out out/
    python main.py check-compat --config car.cfg
    python main.py solve-lp --config spec.cfg --out out/
    python main.py oracle --config family.cfg --target 1
    python main.py sample --config family.cfg --count 100000 --seed 7
    python main.py gibbs --config car.cfg --sweeps 1000 --chains 1000
"""

import argparse
import logging
import sys
from typing import List, Optional

from config import settings
from config.exceptions import CountCompatError
from cli import COMMANDS, EXIT_ERROR, emit_report, parse_model_config, run_command


logger = logging.getLogger(__name__)


def configure_logging(level: str) -> None:
    """Log to stderr and to settings.log_file; stdout carries the report."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr),
            logging.FileHandler(settings.log_file)
        ],
        force=True
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Model config file (key=value lines)")
    common.add_argument("--trunc", type=int, default=None, help="Per-axis support bound N")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed")
    common.add_argument("--out", default=None, help="Directory for CSV artifacts")
    common.add_argument("--format", choices=("text", "csv"), default="text", help="Report format")
    common.add_argument("--log-level", default=settings.log_level, help="Logging level")

    parser = argparse.ArgumentParser(
        prog="countcompat",
        description="Compatibility of conditional count distributions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        command = sub.add_parser(name, parents=[common])
        if name in ("oracle", "gibbs"):
            command.add_argument("--target", type=int, default=0, help="Coordinate whose conditional mean is studied")
        if name == "sample":
            command.add_argument("--count", type=int, default=10000, help="Number of draws")
        if name == "gibbs":
            command.add_argument("--sweeps", type=int, default=1000, help="Recorded sweeps per chain")
            command.add_argument("--burnin", type=int, default=100, help="Discarded sweeps per chain")
            command.add_argument("--chains", type=int, default=None, help="Parallel chains")
            command.add_argument("--min-visits", type=int, default=None, help="Visits needed per configuration")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = parse_model_config(args.config)
        result = run_command(args.command, config, args)
        return emit_report(result, fmt=args.format, out_dir=args.out)
    except (CountCompatError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stdout.write(f"result: error\nerror_type: {type(e).__name__}\nerror: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
