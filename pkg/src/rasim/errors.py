"""Exception taxonomy shared by all simulator modules.

Two families matter to callers: configuration problems (bad setup, caps,
mode misuse) and numerical degeneracies discovered at run time (zero
channels, singular geometry). The CLI maps them to exit codes 2 and 3.
"""


class SimulationError(Exception):
    """Base class for all simulator-specific errors."""


class ConfigurationError(SimulationError, ValueError):
    """Invalid configuration: bad parameter ranges, caps, or mode misuse."""


class CapacityError(ConfigurationError):
    """A requested enumeration exceeds the configured combination cap."""


class DegeneracyError(SimulationError, ArithmeticError):
    """Numerically degenerate input: zero channel, co-located geometry,
    rank-deficient user set, or a vanishing echo."""
