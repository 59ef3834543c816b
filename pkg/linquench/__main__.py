"""
Main entry point for linquench
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .cli import RunConfig, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linquench",
        description="linquench - quenched vs. annealed CLT toolkit for causal linear processes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Commands:
  check      condition report (Hannan, Maxwell-Woodroofe, cond2) and schedule validation
  build      coefficient CSV of the configured process
  simulate   one path S_1..S_N and E(S_N|F_0)
  annealed   KS distance of S_N / sigma_N, omega redrawn per replicate
  quenched   per-omega KS distance of the centered sum / sigma_bar_N
  failure    conditional tail masses at a forced bad omega
  wip        block-maximum frequencies over [N_k, N_k+1)
  tn         weighted ergodic averages T_n e^2 along orbits
  trends     variance and projection ratios on the schedule points

Examples:
  python -m linquench check --spec specs/iid.yaml
  python -m linquench build --spec specs/demo_k3.yaml --out out/demo
  python -m linquench failure --spec specs/failure_k2.yaml --set experiment.M=20000
  python -m linquench quenched --spec specs/geometric.yaml --seed 7 --threads 8
        """
    )

    parser.add_argument(
        "-v", "--version",
        action="version",
        version=f"linquench v{__version__}"
    )

    parser.add_argument(
        "command",
        choices=["check", "build", "simulate", "annealed", "quenched", "failure", "wip", "tn", "trends"],
        help="What to run"
    )

    parser.add_argument(
        "--spec",
        type=str,
        default=None,
        help="Path to the YAML spec file (default: search ./linquench.yaml and friends)"
    )

    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Root seed (overrides experiment.seed)"
    )

    parser.add_argument(
        "--out",
        type=str,
        default="out",
        help="Output directory for artifacts"
    )

    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override one spec value; repeatable"
    )

    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (results do not depend on it)"
    )

    parser.add_argument(
        "--log-level",
        type=str,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Logging level (overrides config)"
    )

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = RunConfig(
            command=args.command,
            spec_path=args.spec,
            seed=args.seed,
            out_dir=args.out,
            overrides=args.overrides,
            threads=args.threads,
            log_level=args.log_level,
        )
    except ValidationError as e:
        print(f"linquench: invalid arguments: {e.errors()[0].get('msg')}", file=sys.stderr)
        return 2

    return run(config, configure_logging=True)


if __name__ == "__main__":
    sys.exit(main())
