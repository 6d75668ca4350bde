"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class NmuError(Exception):
    """Base class for all errors raised by this package."""


class PosetError(NmuError, ValueError):
    pass


class CycleError(PosetError):
    pass


class NotReducedError(PosetError):
    """A cover pair is implied by transitivity of the others."""


class DuplicateCoverError(PosetError):
    pass


class NotBijectiveError(NmuError, ValueError):
    pass


class ChainCoverError(NmuError, ValueError):
    pass


class OverlapError(ChainCoverError):
    pass


class NotSaturatedError(ChainCoverError):
    def __init__(self, message: str, step: tuple[int, int] | None = None):
        super().__init__(message)
        self.step = step


class NotCoveringError(ChainCoverError):
    def __init__(self, message: str, missed: tuple[int, ...] = ()):
        super().__init__(message)
        self.missed = missed


class InvalidCoverError(ChainCoverError):
    pass


class BadParamsError(NmuError, ValueError):
    pass


class NotConvexError(NmuError, ValueError):
    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class SizeLimitError(NmuError):
    pass


class InvariantViolation(NmuError, AssertionError):
    """An internal consistency check failed; always a bug."""
