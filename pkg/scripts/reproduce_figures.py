#!/usr/bin/env python3
"""Run every experiment on the bundled scenarios and write the CSVs to one directory."""

import argparse
import logging
import time
from pathlib import Path

from d2dshare.config import bundled_scenario, load_config
from d2dshare.experiments import EXPERIMENTS, run_experiment

log = logging.getLogger("reproduce")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials (default from config)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    for name in ("symmetric", "asymmetric"):
        config = load_config(bundled_scenario(name))
        for experiment in EXPERIMENTS:
            start = time.perf_counter()
            path = run_experiment(
                config, experiment, out / name / f"{experiment}.csv",
                seed=args.seed, trials=args.trials, workers=args.workers,
            )
            log.info("%-40s %6.1f s", path, time.perf_counter() - start)


if __name__ == "__main__":
    main()
