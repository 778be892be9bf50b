"""
Utilities Module
================

Logging setup and the exception hierarchy.
"""

from .logger import LogContext, get_logger, setup_logging
from .exceptions import (
    PLContourError,
    DomainError,
    CompositionError,
    DegenerateSideError,
    NotLiftableError,
    HypothesisError,
    InvariantViolationError,
    ThreadError,
    ParseError,
    FormatError,
    ScheduleBudgetError,
)

__all__ = [
    "LogContext",
    "get_logger",
    "setup_logging",
    "PLContourError",
    "DomainError",
    "CompositionError",
    "DegenerateSideError",
    "NotLiftableError",
    "HypothesisError",
    "InvariantViolationError",
    "ThreadError",
    "ParseError",
    "FormatError",
    "ScheduleBudgetError",
]
