"""Evaluation and inversion of log-distance pathloss laws."""

import numpy as np

from .errors import NonPositiveDistance
from .model import PathlossModel


def loss_db(model: PathlossModel, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveDistance(f"distance must be > 0, got {r}")
    out = model.slope_db_per_decade * np.log10(r) + model.intercept_db
    return float(out) if out.ndim == 0 else out


def gain(model: PathlossModel, r):
    """Linear power gain 10^(-loss_dB/10); accepts scalars or arrays."""
    out = 10.0 ** (-np.asarray(loss_db(model, r)) / 10.0)
    return float(out) if out.ndim == 0 else out


def invert(model: PathlossModel, loss: float) -> float:
    """Distance at which ``model`` attenuates by ``loss`` dB."""
    return float(10.0 ** ((loss - model.intercept_db) / model.slope_db_per_decade))


def relative_gain(model: PathlossModel, rho, d: float):
    """l(rho) / l(d) = (d / rho)^a; the intercept cancels."""
    return (d / np.asarray(rho, dtype=float)) ** model.exponent
