"""Exception hierarchy and enumeration caps."""

from __future__ import annotations

import os

DEFAULT_CAP = 10**7
CAP_ENV_VAR = "SUMRANK_CAP"


class SumRankError(Exception):
    """Base class for all package errors."""


class FieldError(SumRankError, ValueError):
    """Invalid field parameters, moduli or elements (incl. tower mismatch)."""


class PreconditionError(SumRankError, ValueError):
    """An operation was called outside its documented parameter range."""


class DegenerateCodeError(SumRankError, ValueError):
    """A degenerate code or non-spanning system where one is not allowed."""


class FormatError(SumRankError, ValueError):
    """Malformed serialized input."""


class InvariantViolation(SumRankError, RuntimeError):
    """An internally asserted identity failed. Always a bug or bad input data."""


class CapExceeded(SumRankError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} objects exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


def resolve_cap(cap: int | None = None) -> int:
    """Explicit cap, else the environment override, else DEFAULT_CAP."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_CAP


def check_cap(what: str, size: int, cap: int | None = None) -> None:
    limit = resolve_cap(cap)
    if size > limit:
        raise CapExceeded(what, size, limit)
