"""Interference-threshold mode selection mapped onto a Matern type-II process.

A D2D transmitter keeps D2D mode when the interference it measures is
below a threshold. Geometrically this forbids another D2D-mode
transmitter within a hardcore distance, so the D2D-mode transmitters are
modelled as a Matern type-II thinning of the original PPP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import pathloss
from .errors import BothZero, DomainError
from .model import ModeSelectionOutcome, OperatorParams, PathlossModel, SharedParams


def hardcore_distance(eps_dbm: float, pt_dbm: float, model: PathlossModel) -> float:
    """Separation at which one interferer at ``pt_dbm`` is received at ``eps_dbm``."""
    return pathloss.invert(model, pt_dbm - eps_dbm)


def retention(lam: float, delta: float) -> float:
    """Matern-II retention probability (1 - exp(-lam V)) / (lam V), V = pi delta^2."""
    if lam < 0 or delta < 0:
        raise DomainError(f"lam and delta must be >= 0, got {lam}, {delta}")
    x = lam * math.pi * delta * delta
    if x < 1e-8:
        # series keeps the x -> 0 limit smooth
        return 1.0 - x / 2.0 + x * x / 6.0
    return -math.expm1(-x) / x


def cellular_mode_load(op: OperatorParams, shared: SharedParams, q_d: float, q: float) -> tuple[float, float]:
    """Density of users served in cellular mode and the resulting BS activity.

    Returns ``(load, alpha)`` with alpha = min(1, load / lambda_b).
    """
    for name, v in (("q_d", q_d), ("q", q)):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"{name} must lie in [0, 1], got {v}")
    load = op.lambda_c + (1.0 - q_d) * op.lambda_d + (1.0 - q) * shared.per_operator_lambda
    return load, min(1.0, load / op.lambda_b)


def multiop_ratio(lam: float, lambda_d: float) -> float:
    """Share w = lam / (lam + 2 lambda_d) of multi-operator D2D traffic."""
    denom = lam + 2.0 * lambda_d
    if denom <= 0:
        raise BothZero("lam and lambda_d are both zero")
    return lam / denom


@dataclass(frozen=True)
class OperatorModes:
    """Mode-selection outcomes for one operator's intra band and the shared band.

    Both outcomes carry the operator-level cellular-mode density and alpha.
    """

    intra: ModeSelectionOutcome
    shared: ModeSelectionOutcome


def select_modes(op: OperatorParams, shared: SharedParams) -> OperatorModes:
    delta_d = hardcore_distance(op.eps_d_dbm, shared.pt_d_dbm, shared.pl_d2d)
    delta = hardcore_distance(shared.eps_dbm, shared.pt_d_dbm, shared.pl_d2d)
    q_d = retention(op.lambda_d, delta_d)
    q = retention(shared.lam, delta)
    load, alpha = cellular_mode_load(op, shared, q_d, q)
    return OperatorModes(
        intra=ModeSelectionOutcome(delta=delta_d, q=q_d, cellular_mode_density=load, alpha=alpha),
        shared=ModeSelectionOutcome(delta=delta, q=q, cellular_mode_density=load, alpha=alpha),
    )
