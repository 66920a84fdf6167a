"""Exception types shared across the library.

Everything derives from ValueError so callers that only care about
"bad input" can catch one class, while the CLI maps the concrete
types onto distinct exit codes.
"""


class NotSquareError(ValueError):
    """Matrix input is not square."""


class NotSymmetricError(ValueError):
    """Asymmetry exceeds the construction tolerance."""


class NotPositiveDefiniteError(ValueError):
    """A Cholesky pivot fell at or below the pivot tolerance.

    ``pivot_index`` is the 0-based row of the first failing pivot,
    or None when the failing row is unknown.
    """

    def __init__(self, message: str, pivot_index: int | None = None):
        super().__init__(message)
        self.pivot_index = pivot_index


class SingularBlockError(ValueError):
    """The pivot block of a 2x2 block matrix is numerically singular."""


class IndexOutOfRangeError(ValueError):
    """Node index outside [0, n)."""


class AlreadySelectedError(ValueError):
    """Node index is already part of the selection."""


class DimensionMismatchError(ValueError):
    """Array shapes disagree with the model dimension."""


class NonPositiveVarianceError(ValueError):
    """A variance entry is zero or negative."""


class MatrixParseError(ValueError):
    """Malformed matrix or graph file; carries the 1-based position."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SelfLoopError(ValueError):
    """Graph edge connects a node to itself."""


class DuplicateEdgeError(ValueError):
    """Undirected edge listed twice."""


class KTooLargeError(ValueError):
    """Requested more sensors than there are nodes."""


class TooManySubsetsError(ValueError):
    """C(n, k) exceeds the enumeration cap of the exhaustive solver."""


class InstanceTooSmallError(ValueError):
    """Instance dimension too small for the requested check."""
