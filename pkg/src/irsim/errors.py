"""Exception types shared across the simulator."""


class SimulatorError(Exception):
    """Base class for all simulator-specific failures."""


class DomainError(SimulatorError, ValueError):
    """A scalar argument is outside its physical domain (e.g. distance <= 0)."""


class DimensionMismatchError(SimulatorError, ValueError):
    """Array shapes are inconsistent with each other or with the geometry."""


class RankDeficientError(SimulatorError):
    """The Gram matrix of the stacked user rows is numerically rank deficient.

    Signals degenerate (colinear) user channels; callers may redraw the trial.
    """


class SingularMatrixError(SimulatorError):
    """A regularized normal matrix is numerically singular (ridge = 0 only)."""


class ZeroChannelError(SimulatorError):
    """A channel row with (near-)zero norm where a direction is required."""


class InvalidAllocationError(SimulatorError, ValueError):
    """A power allocation violates the scheme's invariants."""


class UserCountError(SimulatorError, ValueError):
    """An operation restricted to two users was called with a different count."""


class ConfigError(SimulatorError, ValueError):
    """A scenario configuration violates the schema or an invariant."""


class DegenerateTrialsError(SimulatorError):
    """More than 1% of Monte-Carlo trials had to be redrawn."""
