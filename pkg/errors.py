"""
Exception hierarchy shared by the engine and the command-line front end.
Every error carries the process exit code the CLI reports for it.
"""


class FoliationError(Exception):
    """Root of all engine errors."""

    exit_code = 3


class InputError(FoliationError):
    """Malformed or out-of-scope input (bad expression, non-invariant branch, ...)."""

    exit_code = 1


class ParseError(InputError):
    """Expression syntax error with a 1-based source position."""

    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ReductionDepthError(InputError):
    """Raised when reduction of singularities exceeds the depth cap.

    The partially built tree is attached so callers can still render it.
    """

    def __init__(self, max_depth, partial_tree=None):
        self.max_depth = max_depth
        self.partial_tree = partial_tree
        super().__init__(f"reduction exceeded max depth {max_depth}")


class InconsistencyError(FoliationError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 3
