"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GponQkdError(Exception):
    """Base class for all model errors raised by this package."""


class InvalidQuantityError(GponQkdError, ValueError):
    """A physical quantity is non-finite, negative, or otherwise out of domain."""


class TopologyError(GponQkdError, ValueError):
    """A topology violates one or more structural invariants."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid topology")


class WrongChannelError(GponQkdError, ValueError):
    """A wavelength was passed to an operation that does not serve it."""


class ConfigurationError(GponQkdError, ValueError):
    """Configuration is missing a required piece or names an unknown field."""

    def __init__(self, violations: list[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DegenerateInputError(GponQkdError, ZeroDivisionError):
    """A ratio was requested whose denominator is zero."""


class OutOfModelError(GponQkdError, ValueError):
    """A measured value lies outside the range the model can represent."""


class SaturationError(GponQkdError, ValueError):
    """Background counts fill every detector gate."""


class ReferenceMismatchError(GponQkdError, KeyError):
    """Model results and a reference table do not cover the same cells."""

    def __init__(self, missing: list, extra: list):
        self.missing = list(missing)
        self.extra = list(extra)
        super().__init__(f"missing cells: {self.missing}; unexpected cells: {self.extra}")

    def __str__(self) -> str:
        return self.args[0]
