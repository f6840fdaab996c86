"""Exceptions shared by the sparsification toolkit.

The command-line front end maps every class below to exit code 2.
"""


class SparsifyError(Exception):
    """Base class for every error raised by the toolkit."""
    pass


class ParameterError(SparsifyError, ValueError):
    """Raised for infeasible or out-of-range parameters."""
    pass


class PreconditionError(SparsifyError):
    """Raised when an input violates an operation's precondition."""
    pass


class DisconnectedGraphError(PreconditionError):
    """Raised when a connected graph is required but the input is not."""
    pass


class DatasetNotFoundError(SparsifyError, KeyError):
    """Raised for an unknown builtin dataset name."""

    def __str__(self):
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class ParseError(SparsifyError, ValueError):
    """Raised for a malformed edge-list or hyperedge line."""

    def __init__(self, source, line_number, line, reason):
        self.source = str(source)
        self.line_number = line_number
        self.line = line
        self.reason = reason
        super().__init__(f"{self.source}:{line_number}: {reason}: '{line}'")


class ConfigError(SparsifyError):
    """Raised for a malformed configuration value."""
    pass


class WorkerFailureException(SparsifyError):
    """Exception raised when one or more workers fail during batch processing"""
    pass
