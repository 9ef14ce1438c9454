"""Spectrum pooling toolkit: simulation and closed-form analysis."""

from .analytics import (
    AlphaRow,
    AsymptoticReport,
    EbN0Solution,
    asymptotic_report,
    band_gain_convergence,
    delta_inf,
    frequency_map,
    geometric_sum,
    relative_gain,
    solve_ebn0,
)
from .channel import ChannelRealization, RngSpec, draw_gains, stream_for
from .config import SensingConfig, SystemParams, parse_config_text, serialize_config
from .errors import AllocationError, ConfigError, ParameterError, SolverError
from .experiments import (
    Table,
    convergence_table,
    gains_table,
    gamma0_table,
    maxusers_table,
    ncr_table,
    sensing_table,
    sumse_table,
)
from .sensing import (
    ErrorRateCell,
    SensingOutcome,
    error_rate_sweep,
    make_sensing_hook,
    sense_subband,
)
from .pooling import (
    MaxUsersStats,
    NcrComparison,
    OccupancyState,
    TrialReport,
    UserResult,
    compare_ncr,
    max_users,
    run_seeded_trial,
    run_trial,
)
from .waterfill import (
    Gamma0Solution,
    PowerAllocation,
    capacity_asymptotic,
    exp_integral_e1,
    solve_gamma0,
    waterfill_finite,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationError",
    "AlphaRow",
    "AsymptoticReport",
    "ChannelRealization",
    "ConfigError",
    "EbN0Solution",
    "ErrorRateCell",
    "Gamma0Solution",
    "MaxUsersStats",
    "NcrComparison",
    "OccupancyState",
    "ParameterError",
    "PowerAllocation",
    "RngSpec",
    "SensingConfig",
    "SensingOutcome",
    "SolverError",
    "SystemParams",
    "Table",
    "TrialReport",
    "UserResult",
    "asymptotic_report",
    "band_gain_convergence",
    "capacity_asymptotic",
    "compare_ncr",
    "convergence_table",
    "delta_inf",
    "draw_gains",
    "error_rate_sweep",
    "exp_integral_e1",
    "frequency_map",
    "gains_table",
    "gamma0_table",
    "geometric_sum",
    "make_sensing_hook",
    "max_users",
    "maxusers_table",
    "ncr_table",
    "parse_config_text",
    "relative_gain",
    "run_seeded_trial",
    "run_trial",
    "sense_subband",
    "sensing_table",
    "serialize_config",
    "solve_ebn0",
    "solve_gamma0",
    "stream_for",
    "sumse_table",
    "waterfill_finite",
    "__version__",
]
