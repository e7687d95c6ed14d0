"""Command-line entry point: ``d2dshare --config F --experiment NAME --output OUT``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config
from .errors import (
    ConfigParseError,
    ConfigValidationError,
    DomainError,
    InfeasibleOperator,
    NoConvergence,
    PropertyViolated,
    ScenarioError,
)
from .experiments import EXPERIMENTS, run_experiment

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("d2dshare")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="d2dshare", description=__doc__)
    p.add_argument("--config", required=True, help="JSON scenario file")
    p.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    p.add_argument("--output", required=True, help="CSV file to write")
    p.add_argument("--seed", type=int, default=None, help="overrides mc.seed")
    p.add_argument("--trials", type=int, default=None, help="overrides mc.trials")
    p.add_argument("--tol", type=float, default=None, help="overrides solver.ne_tol")
    p.add_argument("--workers", type=int, default=1, help="worker processes for sweeps and trials")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = load_config(args.config)
    except (ConfigParseError, ConfigValidationError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        out = run_experiment(
            config, args.experiment, args.output,
            seed=args.seed, trials=args.trials, tol=args.tol, workers=args.workers,
        )
    except (ScenarioError, ConfigValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NoConvergence, InfeasibleOperator, PropertyViolated, DomainError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    log.info("wrote %s", out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
