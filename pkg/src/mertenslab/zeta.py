"""Riemann zeta on the real line, partial-sum windows, and derived constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

# Bernoulli numbers B_2, B_4, ..., B_16 as exact ratios.
_BERNOULLI = (
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
)

#: Euler's constant gamma, 64-bit value of 0.57721566490153286...
EULER_GAMMA = 0.5772156649015329

#: Linear coefficient in zeta(s) = 1/(s-1) + gamma + gamma1*(s-1) + ...
#: (equal to minus the first Stieltjes constant under the usual
#: (-1)^n/n! normalization); 0.07281584548367672486...
GAMMA1 = 0.07281584548367672


def zeta_real(sigma: float, tol: float = 1e-13) -> float:
    """zeta(sigma) for real sigma > 0, sigma != 1, by Euler-Maclaurin.

    zeta(s) = sum_{n<M} n^-s + M^(1-s)/(s-1) + M^-s/2
              + sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * M^(-s-2j+1) + R.

    M is raised until the first omitted correction term (a standard bound on
    |R|) is below tol; with M >= 32 and eight Bernoulli terms this is far
    below 1e-13 for every sigma >= 0.05.
    """
    if sigma <= 0:
        raise ValueError("zeta_real: sigma must be > 0")
    if sigma == 1:
        raise ValueError("zeta_real: sigma = 1 is the pole")
    m = 32
    while True:
        total = math.fsum(k ** (-sigma) for k in range(1, m))
        total += m ** (1.0 - sigma) / (sigma - 1.0)
        total += 0.5 * m ** (-sigma)
        rising = sigma  # s(s+1)...(s+2j-2), built incrementally
        factorial = 2.0  # (2j)!
        power = m ** (-sigma - 1.0)
        for j, (num, den) in enumerate(_BERNOULLI, start=1):
            total += (num / den) / factorial * rising * power
            rising *= (sigma + 2 * j - 1) * (sigma + 2 * j)
            factorial *= (2 * j + 1) * (2 * j + 2)
            power /= m * m
        # magnitude of the next (omitted) term, B_18/18! ..., bounds the remainder
        next_term = abs(43867 / 798 / factorial * rising * power)
        if next_term <= tol or m >= 4096:
            return total
        m *= 2


def zeta_partial_window(k: int, sigma: float) -> tuple[float, float]:
    """theta(K, sigma) with zeta(sigma), from the partial-sum remainder.

    sum_{l<=K} l^-sigma = K^(1-sigma)/(1-sigma) + zeta(sigma)
                          + theta(K, sigma)/K^sigma,
    and theta is expected to lie in (0, 1); callers assert that.
    """
    if k < 1:
        raise ValueError("zeta_partial_window: K must be >= 1")
    if sigma <= 0 or sigma == 1:
        raise ValueError("zeta_partial_window: need sigma in (0,1) or (1,inf)")
    z = zeta_real(sigma)
    partial = math.fsum(l ** (-sigma) for l in range(1, k + 1))
    theta = (k**sigma) * (partial - k ** (1.0 - sigma) / (1.0 - sigma) - z)
    return theta, z


@dataclass(frozen=True)
class Constants:
    """Named real constants used across the trace and quadratic-form checks.

    gamma1 follows the expansion convention documented at GAMMA1 (linear
    coefficient of zeta about its pole, not the raw Stieltjes value); c4 is
    gamma - gamma1 - 1 only under that convention.
    """

    gamma: float
    gamma1: float
    zeta_half: float
    alpha: float
    beta: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _derive_constants() -> Constants:
    g = EULER_GAMMA
    g1 = GAMMA1
    zeta_half = zeta_real(0.5)
    alpha = -zeta_half
    beta = (
        1.0
        - math.pi**2 / 24.0
        - 0.5 * (math.log(2.0 * math.pi) - 1.0) ** 2
        + 0.5 * (1.0 - g) ** 2
    )
    c1 = 3.0 * g * g - 3.0 * g + 3.0 * g1 + 1.0
    c2 = g * g - 2.0 * g + 2.0 * g1 + 1.0
    c3 = c1 - 2.0 * c2  # = g^2 + g - g1 - 1
    c4 = c3 - g * g  # = g - g1 - 1
    c5 = beta + 0.25 + c3 - g * g
    return Constants(
        gamma=g,
        gamma1=g1,
        zeta_half=zeta_half,
        alpha=alpha,
        beta=beta,
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        c5=c5,
    )


CONSTANTS = _derive_constants()


def constants() -> Constants:
    """The shared Constants instance (immutable)."""
    return CONSTANTS
