"""Closed-form large-system results and convergence diagnostics.

Everything here lives in the N -> infinity limit where per-band averages
concentrate: the idle fraction seen by each successive user, the per-user
and sum spectral efficiencies, and the implicit per-bit SNR relation that
has no explicit solution and is resolved by bisection.
"""

import math
from dataclasses import dataclass

from .config import SystemParams
from .errors import ParameterError, SolverError
from .pooling import run_seeded_trial
from .waterfill import LN2, capacity_asymptotic, exp_integral_e1, solve_gamma0


@dataclass(frozen=True)
class AsymptoticReport:
    """Limit values for a pool of n_users successive water-fillers."""

    n0: float
    n_users: int
    gamma0: float
    delta_inf: float            # idle fraction handed to the next user
    c1_inf: float               # per-subband efficiency of any single user
    phi_per_user: tuple[float, ...]
    phi_sum_inf: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta_inf < 1.0:
            raise ParameterError(f"idle fraction outside [0, 1): {self.delta_inf}")


@dataclass(frozen=True)
class EbN0Solution:
    """Fixed point of the per-bit SNR relation for the first user."""

    eb_n0: float    # linear, not dB
    c1_inf: float
    residual: float


@dataclass(frozen=True)
class AlphaRow:
    """One cell of the finite-versus-limit band-factor comparison."""

    user_index: int
    n_subbands: int
    mean_alpha: float
    alpha_inf: float


def delta_inf(gamma0: float, n0: float) -> float:
    """Limiting fraction of sub-bands a user leaves idle.

    Equals the probability that a unit-mean exponential gain falls below
    the transmission threshold gamma0 * n0.
    """
    if not 0.0 < gamma0 <= 1.0:
        raise ParameterError(f"gamma0 must lie in (0, 1], got {gamma0}")
    if n0 <= 0:
        raise ParameterError(f"n0 must be positive, got {n0}")
    return 1.0 - math.exp(-gamma0 * n0)


def geometric_sum(delta: float, n_users: int) -> float:
    """Sum of delta**(l-1) for l = 1..n_users."""
    if not 0.0 <= delta < 1.0:
        raise ParameterError(f"delta must lie in [0, 1), got {delta}")
    if n_users < 1:
        raise ParameterError(f"n_users must be >= 1, got {n_users}")
    return (1.0 - delta**n_users) / (1.0 - delta)


def asymptotic_report(n0: float, n_users: int) -> AsymptoticReport:
    """Compose the closed-form chain for n_users successive users.

    Each user past the first inherits a delta_inf fraction of its
    predecessor's band, so per-band efficiencies decay geometrically
    while the per-subband efficiency stays at the single-user value.
    """
    if n_users < 1:
        raise ParameterError(f"n_users must be >= 1, got {n_users}")
    sol = solve_gamma0(n0)
    c1 = capacity_asymptotic(sol.gamma0, n0)
    delta = delta_inf(sol.gamma0, n0)
    phi = tuple(delta ** (l - 1) * c1 for l in range(1, n_users + 1))
    return AsymptoticReport(
        n0=n0,
        n_users=n_users,
        gamma0=sol.gamma0,
        delta_inf=delta,
        c1_inf=c1,
        phi_per_user=phi,
        phi_sum_inf=geometric_sum(delta, n_users) * c1,
    )


def relative_gain(n0: float, n_users: int) -> float:
    """Sum-efficiency gain of the pool over the first user alone."""
    rep = asymptotic_report(n0, n_users)
    return rep.phi_sum_inf / rep.c1_inf - 1.0


def _c1_mismatch(c1: float, eb_n0: float) -> float:
    """Residual of the per-bit fixed point at candidate efficiency c1."""
    n0 = 1.0 / (eb_n0 * c1)
    sol = solve_gamma0(n0)
    return c1 - exp_integral_e1(sol.gamma0 * n0) / LN2


_BRACKET_LO = 1e-9
_MAX_DOUBLINGS = 60


def solve_ebn0(
    eb_n0: float,
    tol: float = 1e-9,
    c1_lo: float = _BRACKET_LO,
    c1_hi: float = 1.0,
) -> EbN0Solution:
    """Solve the implicit efficiency-versus-per-bit-SNR relation.

    The first user's efficiency c1 fixes the operating noise power through
    n0 = 1/(eb_n0 * c1), which in turn fixes c1; no explicit solution
    exists, so the fixed point is found by plain bisection with an
    expanding upper bracket.  The inner gamma0 root is re-solved exactly
    at every probe.  The initial bracket [c1_lo, c1_hi] only seeds the
    search; the converged point does not depend on it.

    A fixed point exists for every practical eb_n0 because water-filling
    with full channel knowledge drives the efficiency smoothly to zero as
    the per-bit budget shrinks.  SolverError is raised only when the
    inner gamma0 solve falls outside its own bracket, which takes an
    eb_n0 around 1e-8 or below.
    """
    if eb_n0 <= 0:
        raise ParameterError(f"eb_n0 must be positive, got {eb_n0}")
    if not 0 < c1_lo < c1_hi:
        raise ParameterError(f"bad bracket [{c1_lo}, {c1_hi}]")
    lo = c1_lo
    f_lo = _c1_mismatch(lo, eb_n0)
    if f_lo > 0:
        raise SolverError(
            f"no bracket: residual {f_lo:.3e} already positive at c1={lo:.1e}"
        )
    hi = c1_hi
    f_hi = _c1_mismatch(hi, eb_n0)
    doublings = 0
    while f_hi <= 0:
        doublings += 1
        if doublings > _MAX_DOUBLINGS:
            raise SolverError(
                f"bracket expansion failed: residual {f_hi:.3e} at c1={hi:.3e}"
            )
        hi *= 2.0
        f_hi = _c1_mismatch(hi, eb_n0)

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _c1_mismatch(mid, eb_n0)
        if f_mid <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * max(1.0, hi):
            break
    c1 = 0.5 * (lo + hi)
    residual = _c1_mismatch(c1, eb_n0)
    if abs(residual) >= tol:
        raise SolverError(
            f"bisection stalled at c1={c1:.12g}, residual {residual:.3e}"
        )
    return EbN0Solution(eb_n0=eb_n0, c1_inf=c1, residual=residual)


def frequency_map(t: float, w: float) -> float:
    """Map a unit-mean exponential gain value t onto a band position.

    Runs from -w/2 at t = 0 toward w/2 as t grows, so the image of an
    interval of gains has width w times the probability mass it carries.
    """
    if t < 0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    if w <= 0:
        raise ParameterError(f"w must be positive, got {w}")
    return -w * math.exp(-t) + 0.5 * w


def band_gain_convergence(
    n0: float,
    n_users: int,
    n_list: list[int],
    trials: int,
    seed: int = 42,
    p_avg: float = 1.0,
) -> list[AlphaRow]:
    """Monte Carlo mean idle fraction per user against its limit value.

    A user that never transmits in a trial (the band filled up first)
    contributes an idle fraction of zero to its mean, so small systems
    show depressed means for late users, which is exactly the finite-size
    effect being measured.
    """
    if not n_list:
        raise ParameterError("n_list must be nonempty")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    sol = solve_gamma0(n0)
    delta = delta_inf(sol.gamma0, n0)
    rows: list[AlphaRow] = []
    for n in n_list:
        params = SystemParams(
            n_subbands=n, max_users=n_users, n0=n0, p_avg=p_avg, seed=seed
        )
        sums = [0.0] * n_users
        for t in range(trials):
            report = run_seeded_trial(params, t)
            for user in report.users:
                sums[user.user_index - 1] += user.band_factor
        for l in range(1, n_users + 1):
            rows.append(
                AlphaRow(
                    user_index=l,
                    n_subbands=n,
                    mean_alpha=sums[l - 1] / trials,
                    alpha_inf=delta ** (l - 1),
                )
            )
    return rows
