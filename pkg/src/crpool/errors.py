"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class AllocationError(RuntimeError):
    """No feasible power allocation exists for the given gains."""


class SolverError(RuntimeError):
    """A root search failed to bracket or to converge."""


class ConfigError(ValueError):
    """Bad configuration file or inconsistent command-line parameters."""
