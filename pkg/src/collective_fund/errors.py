"""Collective fund error types.

All custom exceptions inherit from CollectiveFundError to allow
catching any library-specific error.
"""


class CollectiveFundError(Exception):
    """Base exception for all collective fund errors."""

    pass


class ConfigurationError(CollectiveFundError):
    """Invalid configuration or missing policy/table for a requested lookup."""

    pass


class ValidationError(CollectiveFundError):
    """Input violates a documented precondition."""

    pass


class DomainError(CollectiveFundError):
    """Argument outside the domain of a mathematical function."""

    pass


class ParseError(CollectiveFundError):
    """Malformed input file."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class CalibrationError(CollectiveFundError):
    """Preference scale cannot be calibrated for the given schedules."""

    pass


class SolverError(CollectiveFundError):
    """Dynamic programming produced a non-finite value."""

    def __init__(self, message: str, t: float, x: float | None = None) -> None:
        where = f"t={t:g}" if x is None else f"t={t:g}, x={x:g}"
        super().__init__(f"{message} ({where})")
        self.t = t
        self.x = x


class EvaluationError(CollectiveFundError):
    """A fixed policy is infeasible at a reachable state."""

    def __init__(self, message: str, t: float, x: float) -> None:
        super().__init__(f"{message} (t={t:g}, x={x:g})")
        self.t = t
        self.x = x


class PricingError(CollectiveFundError):
    """Annuity cannot be priced."""

    pass


class UnattainableGainError(PricingError):
    """No annuity budget reproduces the requested gain."""

    pass


class UndefinedRatioError(CollectiveFundError):
    """Optimality ratio denominator is zero."""

    pass


class InstanceTooLargeError(CollectiveFundError):
    """Instance too large for exhaustive enumeration."""

    pass


class ReportError(CollectiveFundError):
    """Writing experiment results failed."""

    pass
