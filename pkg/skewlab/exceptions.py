"""Exception hierarchy shared by the algebra services, the CLI and the API."""

from __future__ import annotations

from typing import Any, Optional


class SkewLabError(Exception):
    """Base class for every error raised by skewlab."""


class ConfigError(SkewLabError):
    """Malformed or unsupported ring-tower configuration."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ExpressionError(SkewLabError):
    """Expression text that cannot be parsed or evaluated."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        super().__init__(f"{message} at position {position}" if position is not None else message)


class UsageError(SkewLabError):
    """Operands that do not live in the same ring, precision or normal form."""


class SkewDataError(SkewLabError):
    """Skew data that fails validation; the failing report is attached."""

    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)


class NotInvertibleError(SkewLabError):
    """An inversion precondition does not hold."""

    def __init__(self, message: str, valuation: Any = None):
        self.valuation = valuation
        super().__init__(message)


class ConvergenceError(SkewLabError):
    """A sequence of truncated series is not Cauchy at the working precision."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(f"{message} (index {index})")


class BudgetExceededError(SkewLabError):
    """An enumeration would touch more elements than the configured budget."""


class IdealError(SkewLabError):
    """Ideal-lab precondition failure."""

    def __init__(self, message: str, witness: Optional[str] = None):
        self.witness = witness
        super().__init__(f"{message}; witness {witness}" if witness else message)


class ConsistencyError(SkewLabError):
    """An identity that must hold at finite precision failed."""


class RelationError(SkewLabError):
    """A quantum-matrix relation cannot be realised by the tower under construction."""

    def __init__(self, message: str, relation: str):
        self.relation = relation
        super().__init__(f"{relation}: {message}")


class UnknownSuiteError(SkewLabError):
    """A suite name that is not registered."""
