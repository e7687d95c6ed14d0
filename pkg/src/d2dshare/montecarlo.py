"""Spatial simulation oracle for D2D coverage and mode-selection retention.

Every trial draws from its own Philox stream keyed by (seed, trial index),
so results do not depend on how trials are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import pathloss
from .errors import DomainError, WindowTooSmall
from .model import PathlossModel, Scenario, SharedParams, dbm_to_mw

WINDOW_M = 2000.0
INTERFERENCE_RADIUS_M = 500.0
Z95 = 1.959963984540054


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_ppp(lam: float, window: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on the square [-window/2, window/2]^2, shape (n, 2)."""
    if lam < 0 or window <= 0:
        raise DomainError(f"need lam >= 0 and window > 0, got {lam}, {window}")
    n = rng.poisson(lam * window * window) if lam > 0 else 0
    return rng.uniform(-window / 2.0, window / 2.0, size=(n, 2))


def _received_mw(points: np.ndarray, targets: np.ndarray, pt_mw: float, model: PathlossModel) -> np.ndarray:
    diff = targets[:, None, :] - points[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(divide="ignore"):
        return pt_mw * 10.0 ** (-(model.slope_db_per_decade * np.log10(dist) + model.intercept_db) / 10.0)


def interference_mode_select(
    points: np.ndarray,
    eps_dbm: float,
    pt_dbm: float,
    model: PathlossModel,
    rng: np.random.Generator | None = None,
    order: np.ndarray | None = None,
) -> np.ndarray:
    """Sequential interference-threshold thinning; returns a boolean keep-mask.

    Points are visited in ``order`` (a uniform random permutation drawn
    from ``rng`` if not given). A point keeps D2D mode iff the summed power
    it receives from points already kept is below ``eps_dbm``. No fading
    enters the measurement.
    """
    n = len(points)
    keep = np.zeros(n, dtype=bool)
    if n == 0:
        return keep
    if order is None:
        if rng is None:
            raise DomainError("either rng or order is required")
        order = rng.permutation(n)
    eps_mw = dbm_to_mw(eps_dbm) if math.isfinite(eps_dbm) else math.inf
    g = _received_mw(points, points, dbm_to_mw(pt_dbm), model)
    np.fill_diagonal(g, 0.0)
    acc = np.zeros(n)
    for k in order:
        if acc[k] < eps_mw:
            keep[k] = True
            acc += g[:, k]
    return keep


@dataclass(frozen=True)
class CoverageEstimate:
    gamma: np.ndarray
    coverage: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    trials: int


def _check_window(window: float, radius: float) -> None:
    if radius > window / 2.0:
        raise WindowTooSmall(f"interference radius {radius} m exceeds half the window ({window / 2.0} m)")


def _typical_sinr(seed, trial, lam, eps_dbm, shared, beta_total, window):
    """SINR at the receiver of a D2D-mode transmitter placed at the origin."""
    rng = trial_rng(seed, trial)
    pt_mw = shared.pt_d_mw
    model = shared.pl_d2d
    signal_mean = pt_mw * pathloss.gain(model, shared.d)
    rx = np.array([[shared.d, 0.0]])
    while True:
        others = sample_ppp(lam, window, rng)
        pts = np.vstack([np.zeros((1, 2)), others])
        keep = interference_mode_select(pts, eps_dbm, shared.pt_d_dbm, model, rng=rng)
        # Palm conditioning: the probe itself must have selected D2D mode
        if keep[0]:
            break
    interferers = pts[1:][keep[1:]]
    fading = rng.exponential(1.0, size=1 + len(interferers))
    interference = 0.0
    if len(interferers):
        rx_power = _received_mw(interferers, rx, pt_mw, model)[0]
        interference = math.fsum(fading[1:] * rx_power)
    denom = beta_total * shared.noise_mw + interference
    return fading[0] * signal_mean / denom if denom > 0 else math.inf


def _sinr_chunk(args):
    seed, start, stop, lam, eps_dbm, shared, beta_total, window = args
    return np.array([_typical_sinr(seed, t, lam, eps_dbm, shared, beta_total, window) for t in range(start, stop)])


def _chunks(n: int, parts: int):
    parts = max(1, min(parts, n))
    edges = np.linspace(0, n, parts + 1).astype(int)
    return list(zip(edges[:-1], edges[1:]))


def simulate_sinr(
    lam: float,
    eps_dbm: float,
    shared: SharedParams,
    beta_total: float,
    trials: int,
    seed: int,
    window: float = WINDOW_M,
    radius: float = INTERFERENCE_RADIUS_M,
    workers: int = 1,
) -> np.ndarray:
    """Per-trial SINR samples in trial order."""
    _check_window(window, radius)
    jobs = [(seed, a, b, lam, eps_dbm, shared, beta_total, window) for a, b in _chunks(trials, workers * 4)]
    if workers <= 1:
        parts = [_sinr_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sinr_chunk, jobs))
    return np.concatenate(parts)


def estimate_band_coverage(
    lam: float,
    eps_dbm: float,
    shared: SharedParams,
    beta_total: float,
    gamma_grid,
    trials: int,
    rng_seed: int,
    window: float = WINDOW_M,
    radius: float = INTERFERENCE_RADIUS_M,
    workers: int = 1,
) -> CoverageEstimate:
    if trials < 1000:
        raise DomainError(f"at least 1000 trials required, got {trials}")
    sinr = simulate_sinr(lam, eps_dbm, shared, beta_total, trials, rng_seed, window, radius, workers)
    gammas = np.asarray(gamma_grid, dtype=float)
    hits = (sinr[None, :] > gammas[:, None]).sum(axis=1)
    p = hits / trials
    half = Z95 * np.sqrt(p * (1.0 - p) / trials)
    return CoverageEstimate(gammas, p, np.clip(p - half, 0, 1), np.clip(p + half, 0, 1), trials)


def estimate_coverage(
    scenario: Scenario,
    beta_total: float,
    gamma_grid,
    trials: int,
    rng_seed: int,
    window: float = WINDOW_M,
    radius: float = INTERFERENCE_RADIUS_M,
    workers: int = 1,
) -> CoverageEstimate:
    """Empirical shared-band coverage with normal-approximation 95% intervals."""
    s = scenario.shared
    return estimate_band_coverage(s.lam, s.eps_dbm, s, beta_total, gamma_grid, trials, rng_seed, window, radius, workers)


@dataclass(frozen=True)
class RetentionEstimate:
    fraction: float
    retained: int
    candidates: int
    windows: int


def _retention_chunk(args):
    seed, start, stop, lam, eps_dbm, shared, window, radius = args
    kept = total = 0
    inner = window / 2.0 - radius
    for t in range(start, stop):
        rng = trial_rng(seed, t)
        pts = sample_ppp(lam, window, rng)
        keep = interference_mode_select(pts, eps_dbm, shared.pt_d_dbm, shared.pl_d2d, rng=rng)
        # count only points whose neighbourhood lies inside the window
        core = np.all(np.abs(pts) <= inner, axis=1)
        kept += int(keep[core].sum())
        total += int(core.sum())
    return kept, total


def estimate_retention(
    lam: float,
    eps_dbm: float,
    shared: SharedParams,
    windows: int,
    rng_seed: int,
    window: float = WINDOW_M,
    radius: float = INTERFERENCE_RADIUS_M,
    workers: int = 1,
) -> RetentionEstimate:
    """Pooled fraction of PPP points that keep D2D mode, away from window edges."""
    _check_window(window, radius)
    jobs = [(rng_seed, a, b, lam, eps_dbm, shared, window, radius) for a, b in _chunks(windows, workers * 4)]
    if workers <= 1:
        parts = [_retention_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_retention_chunk, jobs))
    kept = sum(p[0] for p in parts)
    total = sum(p[1] for p in parts)
    return RetentionEstimate(kept / total if total else float("nan"), kept, total, windows)
