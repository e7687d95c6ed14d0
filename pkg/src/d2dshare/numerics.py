"""Adaptive quadrature and the Gauss hypergeometric function on z <= 0.

The quadrature engine is a globally adaptive 7/15-point Gauss-Kronrod
rule. Semi-infinite ranges are mapped onto (0, 1) with x = t / (1 - t).
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import DomainError, NoConvergence
from .model import PathlossModel

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
MAX_INTERVALS = 2000

# 15-point Kronrod abscissae (non-negative half) and weights; the odd
# entries are the embedded 7-point Gauss abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + half * KRONROD_NODES), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NoConvergence(f"integrand not finite on [{a}, {b}]")
    k = half * float(KRONROD_WEIGHTS @ y)
    g = half * float(GAUSS_WEIGHTS @ y[_GAUSS_IDX])
    return k, abs(k - g)


def adaptive_quad(
    f,
    a: float,
    b: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    max_intervals: int = MAX_INTERVALS,
) -> tuple[float, float]:
    """Integrate a vectorised ``f`` over the finite range [a, b].

    Returns ``(value, error_estimate)``. The interval with the largest
    error is bisected until the summed error meets the tolerance.
    """
    if a == b:
        return 0.0, 0.0
    k, e = _gk15(f, a, b)
    heap = [(-e, a, b, k)]
    total, err = k, e
    n = 1
    while err > max(abs_tol, rel_tol * abs(total)):
        if n >= max_intervals:
            raise NoConvergence(
                f"no convergence after {n} subintervals (value {total:.6g}, error {err:.3g})"
            )
        neg_e, lo, hi, kv = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise NoConvergence(f"interval [{lo}, {hi}] cannot be bisected further")
        k1, e1 = _gk15(f, lo, mid)
        k2, e2 = _gk15(f, mid, hi)
        total += k1 + k2 - kv
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
        n += 1
    # re-sum to shed the drift of the running updates
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return total, err


def _to_unit_interval(f, offset: float = 0.0, scale: float = 1.0):
    def g(t):
        t = np.asarray(t, dtype=float)
        one_minus = 1.0 - t
        with np.errstate(divide="ignore", invalid="ignore"):
            x = offset + scale * t / one_minus
            return np.asarray(f(x), dtype=float) * scale / (one_minus * one_minus)

    return g


def integrate_semi_infinite(
    f,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    max_intervals: int = MAX_INTERVALS,
) -> float:
    """Integral of ``f`` over (0, inf) via x = t / (1 - t).

    ``f`` must accept numpy arrays. A divergent integral exhausts the
    subdivision budget and raises NoConvergence.
    """
    value, _ = adaptive_quad(_to_unit_interval(f), 0.0, 1.0, abs_tol, rel_tol, max_intervals)
    return value


_PHI_MIN_NODES = 32
_PHI_MAX_NODES = 4096
# periodic trapezoid error decays like exp(-M * w); 30 / w nodes gives ~1e-13
_PHI_DECAY_TARGET = 30.0


def _phi_nodes_for(r_lo: float, r_hi: float, d: float) -> int:
    # The angular integrand is analytic in a strip of half-width |ln(r/d)|,
    # narrowest where r is closest to d.
    if r_lo <= d <= r_hi:
        return _PHI_MAX_NODES
    r_near = r_lo if r_lo > d else r_hi
    w = abs(math.log(r_near / d))
    m = int(math.ceil(_PHI_DECAY_TARGET / max(w, 1e-12)))
    return int(min(max(m, _PHI_MIN_NODES), _PHI_MAX_NODES))


def _angular_kernel(gamma: float, d: float, exponent: float, m: int):
    phi = 2.0 * np.pi * np.arange(m) / m
    cos_phi = np.cos(phi)
    inv = 1.0 / (gamma * d**exponent)

    def kernel(r):
        r = np.asarray(r, dtype=float)[:, None]
        rho2 = np.maximum(r * r + d * d - 2.0 * r * d * cos_phi, 0.0)
        # f / (1 + f) with f = gamma (d / rho)^a, written without dividing by rho
        val = 1.0 / (1.0 + rho2 ** (0.5 * exponent) * inv)
        return (2.0 * np.pi) * val.mean(axis=1) * r[:, 0]

    return kernel


def annulus_integral(
    gamma: float,
    d: float,
    r_lo: float,
    r_hi: float,
    model: PathlossModel,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Double integral of f r / (1 + f) over phi in [0, 2 pi], r in [r_lo, r_hi].

    ``f = gamma * l(rho) / l(d)`` with rho the distance from a point at
    polar (r, phi) to a receiver at distance ``d`` on the phi = 0 axis.
    ``r_hi`` may be ``math.inf``.
    """
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    if not (0 <= r_lo < r_hi):
        raise DomainError(f"need 0 <= r_lo < r_hi, got [{r_lo}, {r_hi}]")
    if gamma == 0:
        return 0.0
    a = model.exponent
    if math.isinf(r_hi):
        # split so the finite part carries any near-receiver structure
        split = max(r_lo, 2.0 * d)
        head = 0.0
        if split > r_lo:
            head = annulus_integral(gamma, d, r_lo, split, model, abs_tol, rel_tol)
        kernel = _angular_kernel(gamma, d, a, _phi_nodes_for(split, math.inf, d))
        scale = max(split, d)
        tail, _ = adaptive_quad(
            _to_unit_interval(kernel, offset=split, scale=scale), 0.0, 1.0, abs_tol, rel_tol
        )
        return head + tail
    m = _phi_nodes_for(r_lo, r_hi, d)
    if m == _PHI_MAX_NODES and r_lo < d < r_hi:
        # keep r = d on a subinterval boundary
        left, _ = adaptive_quad(_angular_kernel(gamma, d, a, m), r_lo, d, abs_tol, rel_tol)
        right, _ = adaptive_quad(_angular_kernel(gamma, d, a, m), d, r_hi, abs_tol, rel_tol)
        return left + right
    value, _ = adaptive_quad(_angular_kernel(gamma, d, a, m), r_lo, r_hi, abs_tol, rel_tol)
    return value


def _rgamma(x: float) -> float:
    """1 / Gamma(x), zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _series(a: float, b: float, c: float, z: float, max_terms: int = 20000) -> float:
    term = 1.0
    total = 1.0
    comp = 0.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        # Kahan summation; the series alternates for z < 0
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term == 0.0 or (abs(term) < 1e-17 * abs(total) and n > 2):
            return total
    raise NoConvergence(f"2F1 series did not converge for z={z}")


def hyp2f1_neg(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z <= 0.

    Power series for -1/2 <= z <= 0, the Pfaff transformation for
    -2 <= z < -1/2 and the 1/z connection formula below -2.
    """
    if z > 0:
        raise DomainError(f"z must be <= 0, got {z}")
    if c <= 0 and c == math.floor(c):
        raise DomainError(f"c must not be a non-positive integer, got {c}")
    if z == 0:
        return 1.0
    if z >= -0.5:
        return _series(a, b, c, z)
    ab = a - b
    if z >= -2.0 or abs(ab - round(ab)) < 1e-12:
        # 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1))
        return (1.0 - z) ** (-a) * _series(a, c - b, c, z / (z - 1.0))
    w = 1.0 / z
    gc = math.gamma(c)
    t1 = gc * math.gamma(b - a) * _rgamma(b) * _rgamma(c - a) * (-z) ** (-a)
    t2 = gc * math.gamma(a - b) * _rgamma(a) * _rgamma(c - b) * (-z) ** (-b)
    s1 = _series(a, a - c + 1.0, a - b + 1.0, w) if t1 != 0 else 0.0
    s2 = _series(b, b - c + 1.0, b - a + 1.0, w) if t2 != 0 else 0.0
    return t1 * s1 + t2 * s2
