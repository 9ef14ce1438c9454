"""System parameters and the flat key=value configuration format."""

import math
from dataclasses import dataclass

from .errors import ConfigError, ParameterError

# Exactly one of these selects the operating point.
_NOISE_KEYS = ("n0", "snr_db", "ebn0_db")

# Every key the flat configuration format understands.
KNOWN_KEYS = frozenset({
    "n", "users", "trials", "seed", "p_avg",
    "n0", "snr_db", "ebn0_db",
    "sensing_m", "sensing_threshold",
})


@dataclass(frozen=True)
class SensingConfig:
    """Energy-detector settings used when sensing errors are composed in."""

    m_samples: int          # samples averaged per decision
    n0: float               # noise power seen by the detector
    threshold: float        # decide occupied when mean power exceeds this

    def __post_init__(self) -> None:
        if self.m_samples < 1:
            raise ParameterError(f"m_samples must be >= 1, got {self.m_samples}")
        if not (math.isfinite(self.n0) and self.n0 > 0):
            raise ParameterError(f"sensing n0 must be positive, got {self.n0}")
        if not (math.isfinite(self.threshold) and self.threshold > 0):
            raise ParameterError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class SystemParams:
    """One pooling scenario: band count, user budget, operating point.

    Exactly one of n0, snr_db, ebn0_db must be given.  SNR is p_avg / n0;
    both dB inputs resolve to a noise power through that relation (see
    noise_power).  max_users=None lets users keep arriving until no idle
    sub-band remains.
    """

    n_subbands: int
    max_users: int | None = None   # None means "auto"
    n0: float | None = None
    snr_db: float | None = None
    ebn0_db: float | None = None
    p_avg: float = 1.0             # mean power per allocated sub-band
    trials: int = 200
    seed: int = 42
    sensing: SensingConfig | None = None

    def __post_init__(self) -> None:
        if self.n_subbands < 1:
            raise ParameterError(f"n_subbands must be >= 1, got {self.n_subbands}")
        if self.max_users is not None and self.max_users < 1:
            raise ParameterError(f"max_users must be >= 1 or None, got {self.max_users}")
        if not (math.isfinite(self.p_avg) and self.p_avg > 0):
            raise ParameterError(f"p_avg must be positive, got {self.p_avg}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ParameterError(f"seed must be a non-negative integer, got {self.seed}")
        given = [k for k in _NOISE_KEYS if getattr(self, k) is not None]
        if len(given) != 1:
            raise ParameterError(
                f"exactly one of {_NOISE_KEYS} must be set, got {given or 'none'}"
            )
        if self.n0 is not None and not (math.isfinite(self.n0) and self.n0 > 0):
            raise ParameterError(f"n0 must be positive, got {self.n0}")

    @property
    def noise_power(self) -> float:
        """Noise power per sub-band implied by whichever input was given.

        snr_db and ebn0_db both map through SNR = p_avg / n0; the per-bit
        axis is resolved at the nominal 1 bit/s/Hz reference, which keeps
        the sweep grids on the same scale the experiments are quoted in.
        """
        if self.n0 is not None:
            return self.n0
        db = self.snr_db if self.snr_db is not None else self.ebn0_db
        return self.p_avg / (10.0 ** (db / 10.0))


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _to_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from exc


def _to_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {value!r}") from exc


def params_from_mapping(mapping: dict[str, str]) -> SystemParams:
    """Build SystemParams from string key=value pairs (config file or CLI)."""
    unknown = sorted(set(mapping) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    if "n" not in mapping:
        raise ConfigError("missing required key 'n' (number of sub-bands)")

    users: int | None = None
    if "users" in mapping and mapping["users"] != "auto":
        users = _to_int("users", mapping["users"])

    kwargs = {
        "n_subbands": _to_int("n", mapping["n"]),
        "max_users": users,
        "p_avg": _to_float("p_avg", mapping["p_avg"]) if "p_avg" in mapping else 1.0,
        "trials": _to_int("trials", mapping["trials"]) if "trials" in mapping else 200,
        "seed": _to_int("seed", mapping["seed"]) if "seed" in mapping else 42,
    }
    for key in _NOISE_KEYS:
        if key in mapping:
            kwargs[key] = _to_float(key, mapping[key])

    sensing = None
    if "sensing_m" in mapping:
        try:
            probe = SystemParams(n_subbands=kwargs["n_subbands"], **{
                k: v for k, v in kwargs.items() if k != "n_subbands"
            })
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        threshold = (
            _to_float("sensing_threshold", mapping["sensing_threshold"])
            if "sensing_threshold" in mapping
            else 2.0 * probe.noise_power
        )
        sensing = SensingConfig(
            m_samples=_to_int("sensing_m", mapping["sensing_m"]),
            n0=probe.noise_power,
            threshold=threshold,
        )
    elif "sensing_threshold" in mapping:
        raise ConfigError("sensing_threshold given without sensing_m")

    try:
        return SystemParams(sensing=sensing, **kwargs)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def params_to_mapping(params: SystemParams) -> dict[str, str]:
    """Serialize SystemParams to strings; round-trips through parsing."""
    out = {
        "n": str(params.n_subbands),
        "users": "auto" if params.max_users is None else str(params.max_users),
    }
    for key in _NOISE_KEYS:
        value = getattr(params, key)
        if value is not None:
            out[key] = repr(float(value))
    out["p_avg"] = repr(float(params.p_avg))
    out["trials"] = str(params.trials)
    out["seed"] = str(params.seed)
    if params.sensing is not None:
        out["sensing_m"] = str(params.sensing.m_samples)
        out["sensing_threshold"] = repr(float(params.sensing.threshold))
    return out


def serialize_config(params: SystemParams) -> str:
    """Render SystemParams in the flat file format."""
    lines = [f"{key} = {value}" for key, value in params_to_mapping(params).items()]
    return "\n".join(lines) + "\n"
