"""Exception types shared across modules."""
from __future__ import annotations

from .config import ResourceLimit
from .exact_core import SingularMatrixError

__all__ = [
    "ResourceLimit",
    "SingularMatrixError",
    "InternalConsistencyError",
    "ConditionAFails",
    "NotIntegerEmpty",
]


class InternalConsistencyError(AssertionError):
    """An exact re-verification failed. This always means a bug, never a valid outcome."""


class ConditionAFails(ValueError):
    """Some face obtained by fixing k coordinates misses the polytope."""

    def __init__(self, face, message: str = ""):
        super().__init__(message or f"condition (A) fails at face {face}")
        self.face = face


class NotIntegerEmpty(ValueError):
    """An averaged face point has a 0/1 tail, so the polytope was not integer-empty."""
