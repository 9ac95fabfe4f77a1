"""Exception types raised by the solver.

Every error is a subclass of :class:`SolverError` so callers can catch the
whole family at once; the CLI maps configuration problems to exit code 1 and
numerical failures to exit code 2.
"""


class SolverError(Exception):
    """Base class for all package errors."""


class ConfigError(SolverError, ValueError):
    """Invalid user configuration (unknown names, bad sizes, missing files)."""


class DomainError(SolverError, ValueError):
    """Input outside the admissible domain of a function or system."""


class RangeError(DomainError):
    """Argument outside the supported numeric range of an evaluator."""


class DegeneracyError(SolverError, ArithmeticError):
    """Characteristic speeds coincide, or two characteristics are parallel."""


class SingularityError(SolverError, ArithmeticError):
    """A kernel denominator vanishes (within the guard band)."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class AccuracyError(SolverError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""

    def __init__(self, message, est_error=float("nan")):
        super().__init__(message)
        self.est_error = est_error


class CurveError(SolverError, ValueError):
    """Boundary curve is (nearly) characteristic somewhere on the arc."""


class AmbiguityError(SolverError, ValueError):
    """An inverse lookup has several isolated solutions."""

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class ComparisonError(SolverError, ValueError):
    """Two results to be compared share no common labels."""
