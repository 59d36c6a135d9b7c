"""Exception hierarchy shared by all fuzzyrand modules."""


class FuzzyRandError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FuzzyRandError):
    """Invalid data: bad matrix entries, shape mismatches, out-of-range values."""


class ParseError(ValidationError):
    """Malformed input file. Carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(FuzzyRandError):
    """A request the library cannot honor: incompatible model/input combination."""


class CapabilityError(UsageError):
    """A computation outside supported limits, with a pointer to the alternative."""


class NumericalError(FuzzyRandError):
    """Numerical failure during a computation."""


class DegenerateAdjustmentError(NumericalError):
    """Expected index equals the maximum, so the adjusted index is undefined."""


class FitNonConvergenceError(NumericalError):
    """Maximum-likelihood fit did not converge. Carries the last iterate."""

    def __init__(self, message, last_alpha=None):
        self.last_alpha = last_alpha
        super().__init__(message)
