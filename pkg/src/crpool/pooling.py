"""Sequential spectrum pooling: users water-fill the voids left behind.

User 1 owns the whole band.  Each later user senses which sub-bands are
still idle, water-fills only those with the same mean power per sub-band,
and permanently claims every band it actually powers.  The chain stops
when a user finds nothing idle (or the configured user budget runs out).
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization, RngSpec, draw_gains, stream_for
from .config import SystemParams
from .errors import ParameterError
from .waterfill import waterfill_finite

# A sensing hook maps (true idle mask, per-band transmit power, user index)
# to the idle mask the arriving user perceives.  None means perfect sensing.
SensingHook = Callable[[np.ndarray, np.ndarray, int], np.ndarray]


@dataclass
class OccupancyState:
    """Which sub-bands are claimed by whom, and which are still idle."""

    n_subbands: int
    claimed: list[np.ndarray] = field(default_factory=list)
    idle: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @classmethod
    def fresh(cls, n_subbands: int) -> "OccupancyState":
        return cls(n_subbands=n_subbands, idle=np.ones(n_subbands, dtype=bool))

    def claim(self, bands: np.ndarray) -> None:
        """Mark bands as taken by the next user; they must be idle now."""
        bands = np.asarray(bands, dtype=int)
        if bands.size and (bands.min() < 0 or bands.max() >= self.n_subbands):
            raise ParameterError("claimed band index out of range")
        if not np.all(self.idle[bands]):
            raise ParameterError("attempt to claim a band that is not idle")
        self.claimed.append(np.sort(bands))
        self.idle[bands] = False

    def validate(self) -> None:
        """Check disjointness of claims and coverage of the idle complement."""
        seen = np.zeros(self.n_subbands, dtype=int)
        for bands in self.claimed:
            seen[bands] += 1
        if np.any(seen > 1):
            raise AssertionError("claimed sets overlap")
        if not np.array_equal(seen == 0, self.idle):
            raise AssertionError("idle mask is not the complement of the claims")


@dataclass(frozen=True)
class UserResult:
    """Rates and band shares achieved by one transmitting user."""

    user_index: int
    spectral_eff: float        # C_l, bits/s/Hz per sensed-idle sub-band
    band_factor: float         # share of the whole band sensed idle on arrival
    spectral_eff_weighted: float  # band_factor * spectral_eff
    claimed_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.band_factor <= 1.0:
            raise ParameterError(f"band factor outside [0, 1]: {self.band_factor}")


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one protocol run."""

    users: tuple[UserResult, ...]
    sum_spectral_eff: float
    achieved_users: int
    occupancy: OccupancyState
    power_by_band: np.ndarray


@dataclass(frozen=True)
class MaxUsersStats:
    """Distribution summary of achieved user counts over trials."""

    mean: float
    min: int
    max: int
    trials: int


@dataclass(frozen=True)
class NcrComparison:
    """Monte Carlo means for the pooled chain and the pooled-power baseline."""

    cognitive_mean: float
    ncr_mean: float
    cognitive_se: float
    ncr_se: float
    mean_achieved_users: float
    trials: int


def _run_chain(
    n_subbands: int,
    n0: float,
    p_avg: float,
    gain_source: Callable[[int], np.ndarray | None],
    limit: int | None,
    sensing_hook: SensingHook | None = None,
) -> TrialReport:
    """Run the arrival chain until the band fills, users run out, or limit."""
    occ = OccupancyState.fresh(n_subbands)
    power = np.zeros(n_subbands)
    users: list[UserResult] = []
    strict = sensing_hook is None

    user_index = 0
    while limit is None or user_index < limit:
        user_index += 1
        if not occ.idle.any():
            break
        gains = gain_source(user_index)
        if gains is None:
            break
        if gains.shape != (n_subbands,):
            raise ParameterError(
                f"user {user_index} has {gains.shape} gains, expected ({n_subbands},)"
            )
        perceived = occ.idle if strict else sensing_hook(occ.idle.copy(), power, user_index)
        avail = np.flatnonzero(perceived)
        if avail.size == 0:
            break
        alloc = waterfill_finite(gains[avail], n0, p_avg)
        positive = alloc.powers > 0
        active = avail[positive]
        rates = np.log2(1.0 + alloc.powers[positive] * gains[active] / n0)
        c_l = float(rates.sum()) / avail.size
        delta_l = avail.size / n_subbands
        users.append(
            UserResult(
                user_index=user_index,
                spectral_eff=c_l,
                band_factor=delta_l,
                spectral_eff_weighted=delta_l * c_l,
                claimed_count=int(active.size),
            )
        )
        if strict:
            occ.claim(active)
            occ.validate()
        else:
            # A detector miss can hand out a band someone already holds;
            # record only the genuinely new claims so the books still balance.
            occ.claim(active[occ.idle[active]])
        power[active] = alloc.powers[positive]

    return TrialReport(
        users=tuple(users),
        sum_spectral_eff=float(sum(u.spectral_eff_weighted for u in users)),
        achieved_users=len(users),
        occupancy=occ,
        power_by_band=power,
    )


def run_trial(
    params: SystemParams,
    channels: Sequence[ChannelRealization],
    sensing_hook: SensingHook | None = None,
) -> TrialReport:
    """Run one pooling trial over explicit channel realizations.

    Parameters
    ----------
    params : SystemParams
        Scenario description; max_users=None admits as many users as there
        are channel entries.
    channels : sequence of ChannelRealization
        One per arriving user, each over the full band.
    sensing_hook : callable, optional
        Distorts the idle mask a user perceives before allocating.

    Returns
    -------
    TrialReport
        Per-user rates, the sum spectral efficiency, and final occupancy.
    """
    if len(channels) < 1:
        raise ParameterError("need at least one channel realization")
    n = params.n_subbands
    for ch in channels:
        if ch.gains.shape != (n,):
            raise ParameterError(
                f"channel for user {ch.user_index} has {ch.gains.shape} gains, expected ({n},)"
            )
    limit = len(channels)
    if params.max_users is not None:
        limit = min(limit, params.max_users)

    def source(user_index: int) -> np.ndarray | None:
        if user_index > len(channels):
            return None
        return channels[user_index - 1].gains

    return _run_chain(n, params.noise_power, params.p_avg, source, limit, sensing_hook)


def _trial_source(params: SystemParams, trial: int) -> Callable[[int], np.ndarray]:
    def source(user_index: int) -> np.ndarray:
        spec = RngSpec(params.seed, stream_for(trial, user_index))
        return draw_gains(params.n_subbands, spec, user_index=user_index).gains

    return source


def run_seeded_trial(
    params: SystemParams, trial: int, sensing_hook: SensingHook | None = None
) -> TrialReport:
    """Run one trial with gains drawn from the per-(trial, user) streams."""
    return _run_chain(
        params.n_subbands,
        params.noise_power,
        params.p_avg,
        _trial_source(params, trial),
        params.max_users,
        sensing_hook,
    )


def max_users(params: SystemParams, trials: int) -> MaxUsersStats:
    """Monte Carlo distribution of how many users the band accommodates.

    Users keep arriving until the idle set is empty, regardless of
    params.max_users; each transmitting user claims at least one band, so
    a trial always terminates within n_subbands arrivals.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    achieved = np.empty(trials, dtype=int)
    for t in range(trials):
        source = _trial_source(params, t)
        report = _run_chain(params.n_subbands, params.noise_power, params.p_avg, source, None)
        achieved[t] = report.achieved_users
    return MaxUsersStats(
        mean=float(achieved.mean()),
        min=int(achieved.min()),
        max=int(achieved.max()),
        trials=trials,
    )


def compare_ncr(params: SystemParams, trials: int) -> NcrComparison:
    """Compare the pooled chain with a single user holding the pooled budget.

    The baseline (NCR) re-uses each trial's primary channel and water-fills
    all sub-bands with mean power L * p_avg, where L is the user count the
    pooled chain achieved in that same trial.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    n0 = params.noise_power
    cog = np.empty(trials)
    ncr = np.empty(trials)
    achieved = np.empty(trials)
    for t in range(trials):
        source = _trial_source(params, t)
        primary_gains = source(1)
        captured = {1: primary_gains}

        def cached(user_index: int) -> np.ndarray:
            if user_index not in captured:
                captured[user_index] = source(user_index)
            return captured[user_index]

        report = _run_chain(
            params.n_subbands, n0, params.p_avg, cached, params.max_users
        )
        cog[t] = report.sum_spectral_eff
        achieved[t] = report.achieved_users

        alloc = waterfill_finite(primary_gains, n0, params.p_avg * report.achieved_users)
        positive = alloc.powers > 0
        rates = np.log2(1.0 + alloc.powers[positive] * primary_gains[positive] / n0)
        ncr[t] = float(rates.sum()) / params.n_subbands

    def sem(x: np.ndarray) -> float:
        return float(x.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0

    return NcrComparison(
        cognitive_mean=float(cog.mean()),
        ncr_mean=float(ncr.mean()),
        cognitive_se=sem(cog),
        ncr_se=sem(ncr),
        mean_achieved_users=float(achieved.mean()),
        trials=trials,
    )
