"""Exception types shared across the toolkit.

Two families matter to callers: validation errors (malformed input or a
violated precondition) and check failures (an identity that was supposed
to hold did not, e.g. a nonzero residual or a non-integer invariant).
The CLI maps them to exit codes 1 and 2 respectively.
"""

from __future__ import annotations


class CalcError(Exception):
    """Base error carrying a machine-readable location."""

    exit_code = 1

    def __init__(self, reason: str, *, module: str = "", operation: str = "",
                 location=None):
        super().__init__(reason)
        self.reason = reason
        self.module = module
        self.operation = operation
        self.location = location

    def as_object(self) -> dict:
        return {
            "module": self.module,
            "operation": self.operation,
            "reason": self.reason,
            "location": self.location,
        }


class ValidationError(CalcError):
    """Bad input or violated precondition."""

    exit_code = 1


class WindowError(ValidationError):
    """Truncation windows of the operands cannot support the request."""


class EffectiveConeError(ValidationError):
    """A lattice map sent support classes outside the effective cone."""

    def __init__(self, reason, offenders=(), **kw):
        super().__init__(reason, **kw)
        self.offenders = tuple(offenders)


class CheckFailure(CalcError):
    """An identity or integrality check failed on well-formed input."""

    exit_code = 2


class ResidualError(CheckFailure):
    """A series residual that must vanish within the window did not."""

    def __init__(self, reason, residual=None, **kw):
        super().__init__(reason, **kw)
        self.residual = residual


class IntegralityError(CheckFailure):
    """A quantity required to be an integer came out fractional."""

    def __init__(self, reason, value=None, **kw):
        super().__init__(reason, **kw)
        self.value = value
