"""Experiment drivers that turn a configuration into CSV tables."""

from __future__ import annotations

import csv
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import game
from .config import Config
from .coverage import d2d_coverage
from .mode_selection import select_modes
from .montecarlo import estimate_coverage

EPS_SWEEP = tuple(float(e) for e in range(-80, -59))
LOAD_SWEEP = tuple(round(0.2 + 0.1 * k, 10) for k in range(15))
LOAD_SWEEP_EPS = -72.0
MC_GAMMAS = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)
FLOAT_FORMAT = "{:.10g}"

EXPERIMENTS = ("convergence", "beta_vs_eps", "gain_vs_eps", "gain_vs_load", "mc_validate", "diagnostics")


def _solve(config: Config, scenario=None, initial=(0.0, 0.0)):
    s = config.solver
    return game.find_equilibrium(
        scenario or config.scenario, initial=initial, tol=s.ne_tol, max_iter=s.max_iter, br_tol=s.br_tol
    )


def _eps_point(args):
    config, eps = args
    state = _solve(config, config.scenario.with_shared(eps_dbm=eps))
    g1, g2 = game.sharing_gain(state)
    return eps, state.ne[0], state.ne[1], g1, g2


def _load_point(args):
    config, ratio = args
    sc = config.scenario.with_shared(eps_dbm=LOAD_SWEEP_EPS)
    sc = sc.with_operator(1, lambda_d=ratio * sc.operators[1].lambda_b)
    state = _solve(config, sc)
    g1, g2 = game.sharing_gain(state)
    return ratio, g1, g2, state.ne[0], state.ne[1]


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def convergence(config: Config, seed: int = 0, workers: int = 1):
    players = game.build_players(config.scenario)
    rng = np.random.default_rng(seed)
    # operator 1 opens against a silent operator 2
    initial = (float(rng.uniform(0.0, players[0].region.u)), 0.0)
    s = config.solver
    state = game.find_equilibrium(
        config.scenario, initial, tol=s.ne_tol, max_iter=s.max_iter, br_tol=s.br_tol, players=players
    )
    header = ["iteration", "beta_1", "beta_2", "u_1", "u_2"]
    return header, [(e.iteration, e.beta_1, e.beta_2, e.u_1, e.u_2) for e in state.trace]


def beta_vs_eps(config: Config, seed: int = 0, workers: int = 1):
    rows = _map(_eps_point, [(config, e) for e in EPS_SWEEP], workers)
    return ["eps", "beta_1_star", "beta_2_star"], [(r[0], r[1], r[2]) for r in rows]


def gain_vs_eps(config: Config, seed: int = 0, workers: int = 1):
    rows = _map(_eps_point, [(config, e) for e in EPS_SWEEP], workers)
    return ["eps", "gain_1", "gain_2"], [(r[0], r[3], r[4]) for r in rows]


def gain_vs_load(config: Config, seed: int = 0, workers: int = 1):
    rows = _map(_load_point, [(config, r) for r in LOAD_SWEEP], workers)
    return ["lambda2d", "gain_1", "gain_2", "beta_1_star", "beta_2_star"], rows


def mc_validate(config: Config, seed: int = 0, workers: int = 1):
    """Analytic shared-band coverage against simulation at the equilibrium band width."""
    sc = config.scenario
    state = _solve(config)
    beta_total = state.ne[0] + state.ne[1]
    mode = select_modes(sc.operators[0], sc.shared).shared
    est = estimate_coverage(
        sc, beta_total, MC_GAMMAS, config.mc.trials, seed, window=config.mc.window_m, workers=workers
    )
    rows = []
    for k, g in enumerate(MC_GAMMAS):
        analytic = d2d_coverage(g, beta_total, mode.q, sc.shared.lam, mode.delta, sc.shared)
        rows.append((g, analytic, est.coverage[k], est.ci_lo[k], est.ci_hi[k]))
    return ["gamma", "analytic", "empirical", "ci_lo", "ci_hi"], rows


def diagnostics(config: Config, seed: int = 0, workers: int = 1):
    report = game.verify_properties(config.scenario)
    header = [
        "operator", "beta_i", "beta_j", "d2_own", "d2_cross", "d2_constraint",
        "concave", "submodular", "dominant", "constraint_concave",
    ]
    rows = [
        (r.operator, r.beta_i, r.beta_j, r.d2_own, r.d2_cross, r.d2_constraint,
         int(r.concave), int(r.submodular), int(r.dominant), int(r.constraint_concave))
        for r in report.rows
    ]
    return header, rows


_DRIVERS = {
    "convergence": convergence,
    "beta_vs_eps": beta_vs_eps,
    "gain_vs_eps": gain_vs_eps,
    "gain_vs_load": gain_vs_load,
    "mc_validate": mc_validate,
    "diagnostics": diagnostics,
}


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return FLOAT_FORMAT.format(float(v))


def write_csv(path, header, rows) -> None:
    """Write atomically: nothing is left at ``path`` if writing fails."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_experiment(config: Config, experiment: str, out_path, seed: int | None = None,
                   trials: int | None = None, tol: float | None = None, workers: int = 1) -> Path:
    """Run one named experiment and write its CSV; returns the output path."""
    if experiment not in _DRIVERS:
        raise ValueError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if trials is not None:
        config = replace(config, mc=replace(config.mc, trials=trials))
    if tol is not None:
        config = replace(config, solver=replace(config.solver, ne_tol=tol))
    if seed is None:
        seed = config.mc.seed
    header, rows = _DRIVERS[experiment](config, seed=seed, workers=workers)
    write_csv(out_path, header, rows)
    return Path(out_path)
