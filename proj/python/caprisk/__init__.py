"""Income fluctuation problem with capital income risk."""

from ._core import (
    Config,
    ConfigError,
    NonConvergence,
    Policy,
    __version__,
    check,
    gini,
    inequality_report,
    lorenz,
    reproduce,
    simulate,
    solve,
    tail_exponent,
)

__all__ = [
    "Config",
    "ConfigError",
    "NonConvergence",
    "Policy",
    "__version__",
    "check",
    "gini",
    "inequality_report",
    "lorenz",
    "reproduce",
    "simulate",
    "solve",
    "tail_exponent",
]
