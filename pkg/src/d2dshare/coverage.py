"""Coverage probabilities, spectral efficiencies, rates and operator utility."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import pathloss
from .errors import DomainError
from .mode_selection import OperatorModes, multiop_ratio
from .model import OperatorParams, RateReport, SharedParams, SpectrumPartition
from .numerics import annulus_integral, hyp2f1_neg, integrate_semi_infinite

# density weight of the delta..2 delta ring relative to the far field
RING_WEIGHT = 2.0 * math.pi / (4.0 * math.pi / 3.0 + math.sqrt(3.0) / 2.0)


def link_snr(shared: SharedParams) -> float:
    """eta = P_t l(d) / sigma^2 over the full band."""
    return shared.pt_d_mw * pathloss.gain(shared.pl_d2d, shared.d) / shared.noise_mw


def interference_exponent(
    gamma: float,
    q: float,
    lam: float,
    delta: float,
    shared: SharedParams,
    ring_weight: float = RING_WEIGHT,
) -> float:
    """Interference part of the D2D coverage exponent (without the minus sign).

    Interferers beyond 2 delta have density q lam; those in the delta..2 delta
    ring are weighted by ``ring_weight``, the Matern-II pair correlation at
    delta in the dense limit.
    """
    if gamma == 0 or q == 0 or lam == 0:
        return 0.0
    pl, d = shared.pl_d2d, shared.d
    if delta == 0:
        return q * lam * annulus_integral(gamma, d, 0.0, math.inf, pl)
    far = annulus_integral(gamma, d, 2.0 * delta, math.inf, pl)
    ring = annulus_integral(gamma, d, delta, 2.0 * delta, pl)
    return q * lam * (far + ring_weight * ring)


def d2d_coverage(
    gamma: float,
    beta_total: float,
    q: float,
    lam: float,
    delta: float,
    shared: SharedParams,
    ring_weight: float = RING_WEIGHT,
) -> float:
    """P(SINR > gamma) for a typical D2D-mode receiver under Rayleigh fading.

    Serves the shared band (q, lam, beta_1 + beta_2) and an intra-operator
    band (q_d, lambda_d, beta_d) alike.
    """
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    # the shared band pools fractions of both operators' spectrum
    if not (0 <= beta_total <= 2 and 0 <= q <= 1):
        raise DomainError(f"need beta_total in [0, 2] and q in [0, 1], got {beta_total}, {q}")
    noise = gamma * beta_total / link_snr(shared)
    return math.exp(-noise - interference_exponent(gamma, q, lam, delta, shared, ring_weight))


def cellular_coverage(gamma: float, alpha: float, a: float) -> float:
    """Uplink coverage 1 / (1 + alpha 2 gamma/(a-2) 2F1(1, (a-2)/a; 2-2/a; -gamma))."""
    if a <= 2:
        raise DomainError(f"pathloss exponent must exceed 2, got {a}")
    if gamma == 0 or alpha == 0:
        return 1.0
    f = hyp2f1_neg(1.0, (a - 2.0) / a, 2.0 - 2.0 / a, -gamma)
    return 1.0 / (1.0 + alpha * 2.0 * gamma / (a - 2.0) * f)


def spectral_efficiency(p, scale: float = 1.0, abs_tol: float = 1e-10, rel_tol: float = 1e-8) -> float:
    """scale * integral over (0, inf) of p(gamma) / (1 + gamma); ``p`` is scalar-valued."""
    if not (0 < scale <= 1):
        raise DomainError(f"scale must lie in (0, 1], got {scale}")

    def integrand(g):
        return np.array([p(float(x)) for x in np.ravel(g)]) / (1.0 + np.ravel(g))

    return scale * integrate_semi_infinite(integrand, abs_tol, rel_tol)


@functools.lru_cache(maxsize=256)
def cellular_rate(alpha: float, a: float, nu: float) -> float:
    """R_c = nu * integral of P_c / (1 + gamma)."""
    return spectral_efficiency(lambda g: cellular_coverage(g, alpha, a), scale=nu)


# Log-gamma trapezoid: gamma = e^s. The integrand decays like e^s to the
# left and doubly exponentially to the right, so equispaced nodes converge
# geometrically and the resulting R(beta) is analytic in beta.
_LOG_STEP = 0.125
_LOG_MIN = -38.0
_LOG_MAX = 60.0
_TAIL_CUTOFF = 1e-18


@dataclass(frozen=True, eq=False)
class D2DRateCurve:
    """Spectral efficiency R(beta) of one D2D band as a function of its width.

    Interference does not depend on beta, so its exponent is tabulated once
    on the log-gamma nodes; only the noise factor exp(-gamma beta / eta)
    varies. With no interferers R(beta) = e^x E1(x), x = beta / eta.
    """

    eta: float
    gammas: np.ndarray
    exponents: np.ndarray

    def __post_init__(self):
        g = self.gammas
        object.__setattr__(self, "_weights", _LOG_STEP * g / (1.0 + g) * np.exp(-self.exponents))

    @property
    def interference_free(self) -> bool:
        return self.gammas.size == 0

    def __call__(self, beta: float) -> float:
        x = beta / self.eta
        if self.interference_free:
            if x == 0:
                return math.inf
            return float(special.exp1(x) * math.exp(x))
        return float(self._weights @ np.exp(-self.gammas * x))


@functools.lru_cache(maxsize=128)
def d2d_rate_curve(q: float, lam: float, delta: float, shared: SharedParams) -> D2DRateCurve:
    eta = link_snr(shared)
    if q == 0 or lam == 0:
        return D2DRateCurve(eta, np.empty(0), np.empty(0))
    h = _LOG_STEP
    gammas, exponents = [], []
    s = _LOG_MIN
    total = 0.0
    while s <= _LOG_MAX:
        g = math.exp(s)
        c = interference_exponent(g, q, lam, delta, shared)
        term = h * g / (1.0 + g) * math.exp(-c)
        gammas.append(g)
        exponents.append(c)
        total += term
        if s > 0 and term < _TAIL_CUTOFF * total:
            break
        s += h
    else:
        raise DomainError("interference too weak to truncate the rate integral")
    return D2DRateCurve(eta, np.array(gammas), np.array(exponents))


def band_curves(modes: OperatorModes, op: OperatorParams, shared: SharedParams) -> tuple[D2DRateCurve, D2DRateCurve]:
    """(intra-operator curve, shared-band curve) for one operator."""
    intra = d2d_rate_curve(modes.intra.q, op.lambda_d, modes.intra.delta, shared)
    common = d2d_rate_curve(modes.shared.q, shared.lam, modes.shared.delta, shared)
    return intra, common


def rate_components(
    beta_c: float,
    beta_d: float,
    beta_shared: float,
    r_c: float,
    intra: D2DRateCurve,
    common: D2DRateCurve,
    q_d: float,
    q: float,
    w: float,
) -> RateReport:
    r_d = intra(beta_d)
    r_s = common(beta_shared)
    q_c = beta_c * r_c
    # x R(x) -> 0 as x -> 0 even when R(0) is unbounded
    d_term = beta_d * r_d if beta_d > 0 else 0.0
    s_term = beta_shared * r_s if beta_shared > 0 else 0.0
    q_dd = q_c * (1.0 - q_d) + d_term * q_d
    q_s = q_c * (1.0 - q) + s_term * q
    u = (1.0 - w) * q_dd + w * q_s
    return RateReport(r_c=r_c, r_d=r_d, r_shared=r_s, q_c=q_c, q_d=q_dd, q_s=q_s, u=u, w=w)


def evaluate_rates(
    op: OperatorParams,
    shared: SharedParams,
    partition: SpectrumPartition,
    beta_opponent: float,
    modes: OperatorModes,
) -> RateReport:
    """Spectral efficiencies, rates and utility of ``op`` at one strategy profile."""
    if not (0 <= beta_opponent <= 1):
        raise DomainError(f"beta_opponent must lie in [0, 1], got {beta_opponent}")
    r_c = cellular_rate(modes.intra.alpha, shared.pl_cellular.exponent, op.nu)
    intra, common = band_curves(modes, op, shared)
    w = multiop_ratio(shared.lam, op.lambda_d)
    return rate_components(
        partition.beta_c,
        partition.beta_d,
        partition.beta + beta_opponent,
        r_c,
        intra,
        common,
        modes.intra.q,
        modes.shared.q,
        w,
    )
