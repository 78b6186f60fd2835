"""Exception hierarchy shared by all stabwall modules."""

from __future__ import annotations


class StabwallError(Exception):
    """Base class for every error raised by the engine."""


class InputError(StabwallError, ValueError):
    """Malformed user input; the message names the offending field."""


class DegenerateError(StabwallError):
    """A computation collapsed (zero polynomial, proportional slopes, ...)."""


class ChargeVanishes(StabwallError):
    """Both real and imaginary parts of a central charge are zero."""


class CoincidentWalls(StabwallError):
    """Two numerical walls are the same curve."""


class NotRepresentable(StabwallError):
    """A K-class has no non-negative integral dimension vector in the heart."""


class SupportFailure(StabwallError):
    """Generator charges do not span a salient cone."""


class InvariantViolation(StabwallError):
    """An internal consistency check failed."""
