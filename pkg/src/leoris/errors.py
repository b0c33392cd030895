"""Exception types shared across the package."""


class LeorisError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LeorisError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(LeorisError, ArithmeticError):
    """A series or iterative scheme failed to converge within its budget,
    or lost too much precision to cancellation to be trusted."""


class DivergentMomentError(LeorisError, ValueError):
    """A requested distance moment is infinite for the given geometry."""


class ComputationError(LeorisError, ArithmeticError):
    """A numerically computed quantity violates a structural constraint
    (e.g. a variance that came out non-positive)."""


class ConfigError(LeorisError, ValueError):
    """A scenario configuration failed validation. The message names the
    offending field."""
