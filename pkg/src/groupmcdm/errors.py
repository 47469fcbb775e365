"""Exception types shared across the package.

Two families matter to callers: :class:`InputError` covers bad data or bad
arguments (the CLI exits with code 2), :class:`NumericError` covers numeric
and convergence failures discovered during computation (exit code 3).
"""


class GroupMcdmError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GroupMcdmError, ValueError):
    """Invalid input data or arguments."""


class NumericError(GroupMcdmError, ArithmeticError):
    """Numeric or convergence failure during computation."""


class NonPositiveEntry(InputError):
    """A weight that must be strictly positive is zero or negative."""

    def __init__(self, index, value, line=None):
        self.index = index
        self.value = value
        self.line = line
        where = f"entry {index}" if line is None else f"line {line}, column {index + 1}"
        super().__init__(f"non-positive weight {value!r} at {where}")


class DimensionTooSmall(InputError):
    """Fewer than two parts: there is no ratio information to work with."""

    def __init__(self, length):
        self.length = length
        super().__init__(f"need at least 2 parts, got {length}")


class DimensionMismatch(InputError):
    """Operands whose dimensions must agree do not."""


class WeightDimensionMismatch(InputError):
    """A decision-maker weight vector does not match the number of DMs."""


class InsufficientSamples(InputError):
    """An operation needs more decision-makers than were supplied."""


class AllZeroRatios(InputError):
    """Every DM weighs the two criteria equally; no ranks can be formed."""


class TooManyClusters(InputError):
    """Requested more clusters than there are decision-makers."""


class ParseError(InputError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class RaggedRow(ParseError):
    """A CSV row whose width differs from the header."""


class InconsistentLogRatios(NumericError):
    """A pairwise log-ratio vector is not additively consistent."""

    def __init__(self, max_violation, tol):
        self.max_violation = max_violation
        self.tol = tol
        super().__init__(
            f"log-ratio vector violates additive consistency by {max_violation:.3e}"
            f" (tolerance {tol:.1e})"
        )


class InconsistentArray(NumericError):
    """An average array is not antisymmetric or not additively consistent."""

    def __init__(self, max_violation, tol, what="additive consistency"):
        self.max_violation = max_violation
        self.tol = tol
        super().__init__(
            f"array violates {what} by {max_violation:.3e} (tolerance {tol:.1e})"
        )
