"""Reproducible Rayleigh block-fading channel generation.

Gains are drawn directly as unit-mean exponential power gains; every
downstream formula consumes |h|^2 only, so complex amplitudes are never
materialised.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# Streams are laid out as stream_id = trial * _ROLE_STRIDE + role, where
# role is the 1-based user index (0 is reserved) and values >= _HOOK_ROLE
# belong to sensing hooks.  Keeps every (trial, user) pair collision-free
# for any sub-band count used here.
_ROLE_STRIDE = 65536
_HOOK_ROLE = 65000


@dataclass(frozen=True)
class RngSpec:
    """Identifies one independent random stream (e.g. one user in one trial)."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        # spawn_key makes streams independent of call order and of how
        # many sibling streams are ever instantiated.
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(seq)


def stream_for(trial: int, role: int) -> int:
    """Map a (trial, role) pair to a collision-free stream id."""
    if trial < 0 or role < 0 or role >= _ROLE_STRIDE:
        raise ParameterError(f"bad stream coordinates ({trial}, {role})")
    return trial * _ROLE_STRIDE + role


def hook_stream_for(trial: int) -> int:
    """Stream id reserved for the sensing hook of one trial."""
    return stream_for(trial, _HOOK_ROLE)


@dataclass(frozen=True)
class ChannelRealization:
    """Per-user vector of sub-band power gains |h|^2 with unit mean."""

    gains: np.ndarray
    user_index: int = 1


def draw_gains(n: int, rng: RngSpec, user_index: int = 1) -> ChannelRealization:
    """Draw n i.i.d. unit-mean exponential power gains.

    The squared magnitude of a unit-variance circularly symmetric complex
    Gaussian amplitude is Exp(1); that power gain is all the rate and
    threshold formulas ever need.
    """
    if n < 1:
        raise ParameterError(f"need at least one sub-band, got n={n}")
    gains = rng.generator().standard_exponential(n)
    return ChannelRealization(gains=gains, user_index=user_index)


def draw_cross_gain(rng: RngSpec) -> float:
    """One unit-mean exponential power gain for an inter-transmitter link."""
    return float(rng.generator().standard_exponential())
