"""Exception hierarchy shared by the certification modules."""

from typing import Any, Sequence


class LehmanCertError(Exception):
    """Base class for all lehmancert errors."""


class CatalogError(LehmanCertError, ValueError):
    """Zero catalog could not be parsed, read, or validated."""


class CatalogExhaustedError(CatalogError):
    """A truncation height lies beyond the last ordinate of the catalog."""

    def __init__(self, T: float, last: float) -> None:
        super().__init__(f"catalog exhausted: T={T!r} exceeds last ordinate {last!r}")
        self.T = T
        self.last = last


class ConditionViolationError(LehmanCertError, ValueError):
    """Parameter set violates the side conditions of the selected variant."""

    def __init__(self, violations: Sequence[Any]) -> None:
        self.violations = list(violations)
        joined = "; ".join(str(v) for v in self.violations)
        super().__init__(f"condition violation: {joined}")


class DomainError(LehmanCertError, ValueError):
    """Argument outside the domain of a closed form or oracle function."""


class QuadratureError(LehmanCertError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
