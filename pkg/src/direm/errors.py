"""Exception and warning types raised by direm."""


class DiremError(Exception):
    """Base class for all direm errors."""


class SymmetryViolation(DiremError, ValueError):
    pass


class ConvergenceFailure(DiremError, RuntimeError):
    pass


class DegenerateDegree(DiremError, ValueError):
    """A degree (row sum or node weight) that must be positive is not.

    ``indices`` lists the offending rows.
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = [int(i) for i in indices]


class Disconnected(DiremError, ValueError):
    """The graph is not connected; ``component_sizes`` lists the pieces."""

    def __init__(self, message, component_sizes=()):
        super().__init__(message)
        self.component_sizes = [int(s) for s in component_sizes]


class EmptyComparison(DiremError, ValueError):
    pass


class EdgeListParseError(DiremError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EigengapWarning(UserWarning):
    pass


class ClampWarning(UserWarning):
    pass
