"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for errors raised by this package."""


class InvalidStateError(SimulationError, ValueError):
    """A matrix that should be a density matrix violates its invariants."""


class NumericalError(SimulationError, RuntimeError):
    """An iterative numerical routine failed to converge."""
