"""Water-filling power allocation and its large-system limits.

The finite case is solved exactly by the sort-and-check construction:
sort gains in descending order, grow the candidate active set one band at
a time, and stop as soon as the implied water level clears the threshold
of every band inside the set and of none outside it.  The asymptotic case
reduces to a scalar root equation in the Lagrange multiplier gamma0.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import AllocationError, ParameterError, SolverError

LN2 = math.log(2.0)
_EULER_GAMMA = 0.5772156649015328606

# Bracket for the gamma0 root search.  The residual tends to +inf as
# gamma0 -> 0+ and is strictly negative at gamma0 = 1 for every n0 > 0.
_GAMMA_LO = 1e-12
_GAMMA_HI = 1.0


@dataclass(frozen=True)
class PowerAllocation:
    """Result of one finite water-filling solve."""

    powers: np.ndarray      # per-band power, aligned with the input gains
    water_level: float      # common level 1/gamma0
    gamma0: float           # reciprocal water level
    active_set: np.ndarray  # indices of bands that received positive power


@dataclass(frozen=True)
class Gamma0Solution:
    """Root of the asymptotic average-power constraint."""

    gamma0: float
    n0: float
    residual: float


def waterfill_finite(gains, n0: float, p_avg: float = 1.0) -> PowerAllocation:
    """Allocate power over parallel sub-bands under a mean-power constraint.

    Parameters
    ----------
    gains : array_like
        Non-negative channel power gains, one per sub-band.
    n0 : float
        Noise power per sub-band, > 0.
    p_avg : float
        Mean power per sub-band; the total budget is ``len(gains) * p_avg``.

    Returns
    -------
    PowerAllocation
        Exact allocation with ``powers[i] = max(0, w - n0 / gains[i])``
        where the water level w makes the powers average to p_avg.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ParameterError("gains must be a non-empty 1-d array")
    if not np.all(np.isfinite(g)) or np.any(g < 0):
        raise ParameterError("gains must be finite and non-negative")
    if not (np.isfinite(n0) and n0 > 0):
        raise ParameterError(f"noise power must be positive, got {n0}")
    if not (np.isfinite(p_avg) and p_avg > 0):
        raise ParameterError(f"mean power must be positive, got {p_avg}")
    if not np.any(g > 0):
        raise AllocationError("all sub-band gains are zero")

    order = np.argsort(g)[::-1]
    g_sorted = g[order]
    n_pos = int(np.count_nonzero(g_sorted > 0))
    inv = np.empty_like(g_sorted)
    inv[:n_pos] = n0 / g_sorted[:n_pos]
    inv[n_pos:] = np.inf

    budget = g.size * p_avg
    ks = np.arange(1, n_pos + 1, dtype=float)
    levels = (budget + np.cumsum(inv[:n_pos])) / ks
    # k * (levels - inv) is non-increasing in k, so feasibility is a prefix
    # and the count below equals the optimal active-set size.
    k = int(np.count_nonzero(levels > inv[:n_pos]))
    w = float(levels[k - 1])

    powers = np.zeros_like(g)
    active = order[:k]
    powers[active] = w - inv[:k]
    return PowerAllocation(
        powers=powers,
        water_level=w,
        gamma0=1.0 / w,
        active_set=np.sort(active),
    )


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = integral of exp(-t)/t from x to infinity.

    Alternating series below x = 1, modified-Lentz continued fraction
    above, both iterated until the update falls below 1e-15 in relative
    terms.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0):
        raise ParameterError(f"E1 is only evaluated for finite x > 0, got {x!r}")
    x = float(x)
    if x <= 1.0:
        total = -_EULER_GAMMA - math.log(x)
        term = 1.0
        sign = 1.0
        for k in range(1, 200):
            term *= x / k
            total += sign * term / k
            sign = -sign
            if term / k < 1e-17:
                return total
        raise SolverError("E1 series did not converge")  # pragma: no cover
    # Continued fraction E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for k in range(1, 200):
        a = -float(k * k)
        b += 2.0
        d = a * d + b
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return math.exp(-x) * h
    raise SolverError("E1 continued fraction did not converge")  # pragma: no cover


def _power_residual(gamma0: float, n0: float) -> float:
    """Mean allocated power minus the unit target, in the ergodic limit."""
    u = gamma0 * n0
    return math.exp(-u) / gamma0 - n0 * exp_integral_e1(u) - 1.0


def solve_gamma0(n0: float) -> Gamma0Solution:
    """Solve the ergodic mean-power constraint for the multiplier gamma0.

    The root always lies in (0, 1]: the residual blows up as gamma0 -> 0
    and is negative at 1.  Brent's method on that bracket converges to
    machine precision.
    """
    if not (isinstance(n0, (int, float)) and math.isfinite(n0) and n0 > 0):
        raise ParameterError(f"noise power must be finite and positive, got {n0!r}")
    n0 = float(n0)
    f_lo = _power_residual(_GAMMA_LO, n0)
    f_hi = _power_residual(_GAMMA_HI, n0)
    if not (f_lo > 0.0 > f_hi):
        raise SolverError(
            f"gamma0 root not bracketed for n0={n0}: f({_GAMMA_LO})={f_lo}, f(1)={f_hi}"
        )
    root = brentq(_power_residual, _GAMMA_LO, _GAMMA_HI, args=(n0,), xtol=1e-15)
    residual = _power_residual(root, n0)
    # Brent stops on the gamma0 axis; for very small roots the residual axis
    # is badly scaled, so polish with Newton (the derivative is -e^-u/g^2).
    for _ in range(4):
        if abs(residual) <= 1e-13:
            break
        u = root * n0
        polished = root + residual * root * root * math.exp(u)
        if not (0.0 < polished <= _GAMMA_HI):
            break
        better = _power_residual(polished, n0)
        if abs(better) >= abs(residual):
            break
        root, residual = polished, better
    if abs(residual) > 1e-10:
        raise SolverError(f"gamma0 solve left residual {residual} at n0={n0}")
    return Gamma0Solution(gamma0=float(root), n0=n0, residual=float(residual))


def capacity_asymptotic(gamma0: float, n0: float) -> float:
    """Ergodic spectral efficiency of a water-filling user, bits/s/Hz.

    Equals E1(gamma0 * n0) / ln 2 for unit-mean exponential gains.
    """
    if not (0.0 < gamma0 <= 1.0):
        raise ParameterError(f"gamma0 must lie in (0, 1], got {gamma0}")
    if not (math.isfinite(n0) and n0 > 0):
        raise ParameterError(f"noise power must be positive, got {n0}")
    return exp_integral_e1(gamma0 * n0) / LN2
