"""Independent reference computations used only by the tests."""

import math

import numpy as np
from scipy import integrate, special


def exp1_series(x: float) -> float:
    """E1(x) from its convergent power series (fine for small x)."""
    total, term = 0.0, 1.0
    for k in range(1, 200):
        term *= -x / k
        total += term / k
    return -np.euler_gamma - math.log(x) - total


def hyp2f1_euler(a, b, c, z):
    """2F1 by quadrature of the Euler integral, valid for c > b > 0 and z <= 0."""
    val, _ = integrate.quad(
        lambda t: (1.0 - z * t) ** (-a), 0.0, 1.0,
        weight="alg", wvar=(b - 1.0, c - b - 1.0), epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    return val * special.gamma(c) / (special.gamma(b) * special.gamma(c - b))


def cellular_coverage_euler(gamma, alpha, a):
    f = hyp2f1_euler(1.0, (a - 2.0) / a, 2.0 - 2.0 / a, -gamma)
    return 1.0 / (1.0 + alpha * 2.0 * gamma / (a - 2.0) * f)


def annulus_riemann(gamma, d, r_lo, r_hi, exponent, nr=10_000, nphi=1000):
    """Midpoint grid in log r and phi; a crude brute-force reference."""
    u = np.linspace(math.log(r_lo), math.log(r_hi), nr + 1)
    um = 0.5 * (u[1:] + u[:-1])
    r = np.exp(um)[:, None]
    phi = (np.arange(nphi) + 0.5) * (2 * math.pi / nphi)
    rho2 = r * r + d * d - 2 * r * d * np.cos(phi)[None, :]
    f = gamma * (d * d / rho2) ** (exponent / 2)
    inner = (f / (1 + f)).sum(axis=1) * (2 * math.pi / nphi)
    return float((inner * np.exp(2 * um)).sum() * (u[1] - u[0]))
