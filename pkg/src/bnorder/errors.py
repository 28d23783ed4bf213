"""Exception hierarchy shared by all modules."""


class BNError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BNError, ValueError):
    """An argument or data object violates its documented invariants."""


class DataError(ValidationError):
    """Malformed input data (CSV rows, edge lists, prior matrices)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationError(ValidationError):
    """Invalid run configuration or hyperparameters."""


class CyclicGraphError(BNError):
    """A graph expected to be acyclic contains a directed cycle."""


class RankError(BNError, IndexError):
    """A combination rank is outside ``[1, C(n, k)]``."""


class LimitError(BNError):
    """A parent set exceeds the configured size limit."""


class CapacityError(BNError, MemoryError):
    """A table would exceed the configured memory cap."""


class ProposalError(BNError):
    """An order proposal cannot be generated (fewer than two nodes)."""


class EmptyWorkError(BNError):
    """A reduction received only identity cells."""
