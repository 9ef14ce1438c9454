"""Power detection of occupied sub-bands from finite sample records.

A sensing user listens for M symbol periods, averages the received power,
and declares the band occupied when that average clears a threshold set
above the noise floor.  Misses and false alarms both happen; the sweep
helper maps their rates against M and SNR, and the hook factory lets the
pooling engine run with this detector in the loop instead of an oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import RngSpec, hook_stream_for
from .config import SensingConfig
from .errors import ParameterError


@dataclass(frozen=True)
class SensingOutcome:
    decided_occupied: bool
    mean_power: float
    truth_occupied: bool

    def __post_init__(self) -> None:
        if self.mean_power < 0:
            raise ParameterError(f"mean power cannot be negative: {self.mean_power}")


def _received_power(
    occupied: bool,
    amplitude: float,
    n0: float,
    m_samples: int,
    rng: np.random.Generator,
) -> float:
    """Sample mean of |y|^2 over one record of m_samples symbols."""
    noise = rng.standard_normal((2, m_samples)) * math.sqrt(n0 / 2.0)
    if occupied:
        symbols = rng.integers(0, 2, m_samples) * 2.0 - 1.0
        noise[0] += amplitude * symbols
    return float(np.mean(noise[0] ** 2 + noise[1] ** 2))


def sense_subband(
    occupied: bool,
    tx_power: float,
    cross_gain: float,
    cfg: SensingConfig,
    rng: RngSpec,
) -> SensingOutcome:
    """Simulate one detection attempt on a single sub-band.

    The occupied branch receives unit-power binary symbols scaled by
    sqrt(cross_gain * tx_power) in complex noise of total variance
    cfg.n0; the idle branch receives noise alone.  Decision: the sample
    mean power over cfg.m_samples exceeds cfg.threshold.
    """
    if occupied and tx_power <= 0:
        raise ParameterError("an occupied band needs positive transmit power")
    if tx_power < 0 or cross_gain < 0:
        raise ParameterError("powers and gains cannot be negative")
    gen = rng.generator()
    amplitude = math.sqrt(cross_gain * tx_power) if occupied else 0.0
    mean_power = _received_power(occupied, amplitude, cfg.n0, cfg.m_samples, gen)
    return SensingOutcome(
        decided_occupied=bool(mean_power > cfg.threshold),
        mean_power=mean_power,
        truth_occupied=occupied,
    )


@dataclass(frozen=True)
class ErrorRateCell:
    """Miss and false-alarm estimates for one (snr, M) sweep point."""

    snr_db: float
    m_samples: int
    miss_rate: float
    false_alarm_rate: float


def error_rate_sweep(
    snr_db_list: list[float],
    m_list: list[int],
    trials: int,
    rng: RngSpec,
    threshold: float | None = None,
    n0: float = 1.0,
) -> list[ErrorRateCell]:
    """Monte Carlo miss / false-alarm rates over an (snr, M) grid.

    Each occupied trial draws a fresh unit-mean exponential cross gain,
    so the miss rate is averaged over the fading.  One independent
    stream per grid cell keeps cells reproducible in isolation.
    """
    if not snr_db_list or not m_list:
        raise ParameterError("snr and M grids must be nonempty")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if any(m < 1 for m in m_list):
        raise ParameterError("every M must be >= 1")
    thr = 2.0 * n0 if threshold is None else threshold
    if thr <= 0:
        raise ParameterError(f"threshold must be positive, got {thr}")

    cells: list[ErrorRateCell] = []
    for ci, snr_db in enumerate(snr_db_list):
        tx_power = n0 * 10.0 ** (snr_db / 10.0)
        for cj, m in enumerate(m_list):
            gen = RngSpec(rng.seed, rng.stream_id + 1 + ci * len(m_list) + cj).generator()
            gains = gen.standard_exponential(trials)
            symbols = gen.integers(0, 2, (trials, m)) * 2.0 - 1.0
            noise_r = gen.standard_normal((trials, m)) * math.sqrt(n0 / 2.0)
            noise_i = gen.standard_normal((trials, m)) * math.sqrt(n0 / 2.0)
            amp = np.sqrt(gains * tx_power)[:, None]
            occ_power = np.mean((amp * symbols + noise_r) ** 2 + noise_i**2, axis=1)
            miss = float(np.mean(occ_power <= thr))

            idle_r = gen.standard_normal((trials, m)) * math.sqrt(n0 / 2.0)
            idle_i = gen.standard_normal((trials, m)) * math.sqrt(n0 / 2.0)
            idle_power = np.mean(idle_r**2 + idle_i**2, axis=1)
            fa = float(np.mean(idle_power > thr))
            cells.append(
                ErrorRateCell(
                    snr_db=snr_db, m_samples=m, miss_rate=miss, false_alarm_rate=fa
                )
            )
    return cells


def single_sample_miss_rate(snr_db: float, threshold: float, n0: float = 1.0) -> float:
    """Closed-form M = 1 miss rate under the fading-averaged model.

    With one complex sample, the received power on an occupied band is
    exponential with mean tx_power + n0 once the fading is averaged out,
    so the detector misses with probability 1 - exp(-thr / (P + n0)).
    """
    tx_power = n0 * 10.0 ** (snr_db / 10.0)
    return 1.0 - math.exp(-threshold / (tx_power + n0))


def single_sample_false_alarm_rate(threshold: float, n0: float = 1.0) -> float:
    """Closed-form M = 1 false-alarm rate: exp(-thr / n0)."""
    return math.exp(-threshold / n0)


def make_sensing_hook(cfg: SensingConfig, seed: int, trial: int):
    """Build a detector-in-the-loop hook for the pooling engine.

    The returned callable replaces the oracle idle mask with the mask a
    power detector would report: a miss re-offers an occupied band, a
    false alarm withholds an idle one.  The licensed first user never
    senses and always sees the full band.  Draws come from the per-trial
    hook stream, consumed in user order, so a trial replays identically.
    """
    gen = RngSpec(seed, hook_stream_for(trial)).generator()

    def hook(idle: np.ndarray, power: np.ndarray, user_index: int) -> np.ndarray:
        if user_index == 1:
            return idle
        n = idle.size
        gains = gen.standard_exponential(n)
        symbols = gen.integers(0, 2, (n, cfg.m_samples)) * 2.0 - 1.0
        noise_r = gen.standard_normal((n, cfg.m_samples)) * math.sqrt(cfg.n0 / 2.0)
        noise_i = gen.standard_normal((n, cfg.m_samples)) * math.sqrt(cfg.n0 / 2.0)
        amp = np.sqrt(gains * power)[:, None]
        mean_power = np.mean((amp * symbols + noise_r) ** 2 + noise_i**2, axis=1)
        return mean_power <= cfg.threshold

    return hook
