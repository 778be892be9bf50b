"""
Custom Exceptions
=================

Exception hierarchy for plcontour. Every error carries a stable code, a
details mapping and the process exit code the CLI reports for it.
"""

from typing import Any, Optional


class PLContourError(Exception):
    """
    Base exception for all plcontour errors.

    All custom exceptions should inherit from this class.
    """

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        code: str = "PLCONTOUR_ERROR",
        details: Optional[dict[str, Any]] = None
    ):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to dictionary for JSON reports."""
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "details": self.details,
            }
        }


class DomainError(PLContourError):
    """Raised for points or intervals outside a map's domain, or bad indices."""

    exit_code = 3

    def __init__(self, message: str = "Value outside domain", details: dict = None):
        super().__init__(message=message, code="DOMAIN_ERROR", details=details)


class CompositionError(PLContourError):
    """Raised when the image of the inner map escapes the outer map's domain."""

    exit_code = 4

    def __init__(
        self,
        message: str = "Image of inner map escapes outer domain",
        details: dict = None
    ):
        super().__init__(message=message, code="COMPOSITION_ERROR", details=details)


class DegenerateSideError(PLContourError):
    """Raised when a pointed map is constant on one side of 0."""

    exit_code = 5

    def __init__(
        self,
        message: str = "Map is constant on one side",
        side: str = None,
        details: dict = None
    ):
        details = details or {}
        if side:
            details["side"] = side
        super().__init__(message=message, code="DEGENERATE_SIDE", details=details)


class NotLiftableError(PLContourError):
    """Raised when the right image of t cannot cover t([y, 0])."""

    exit_code = 6

    def __init__(
        self,
        message: str = "Right image does not cover the left range",
        y: Any = None,
        details: dict = None
    ):
        details = details or {}
        if y is not None:
            details["y"] = str(y)
        super().__init__(message=message, code="NOT_LIFTABLE", details=details)


class HypothesisError(PLContourError):
    """Raised when the hypotheses of a construction are not met."""

    exit_code = 7

    def __init__(
        self,
        message: str = "Hypotheses not satisfied",
        failed: list[str] = None,
        details: dict = None
    ):
        details = details or {}
        self.failed = list(failed or [])
        if self.failed:
            details["failed"] = self.failed
        super().__init__(message=message, code="HYPOTHESIS_FAILED", details=details)


class InvariantViolationError(PLContourError):
    """Raised when a constructed object fails its own verification."""

    exit_code = 8

    def __init__(
        self,
        message: str = "Post-construction verification failed",
        check: str = None,
        witness: Any = None,
        details: dict = None
    ):
        details = details or {}
        if check:
            details["check"] = check
        if witness is not None:
            details["witness"] = str(witness)
        super().__init__(message=message, code="INVARIANT_VIOLATION", details=details)


class ThreadError(PLContourError):
    """Raised when a coordinate list is not a thread of the system."""

    exit_code = 9

    def __init__(
        self,
        message: str = "Not a thread",
        level: int = None,
        details: dict = None
    ):
        details = details or {}
        self.level = level
        if level is not None:
            details["level"] = level
        super().__init__(message=message, code="THREAD_ERROR", details=details)


class ParseError(PLContourError):
    """Raised for malformed lines in map, system or simplicial files."""

    exit_code = 10

    def __init__(
        self,
        message: str = "Malformed input",
        line: int = None,
        path: str = None,
        details: dict = None
    ):
        details = details or {}
        if line is not None:
            details["line"] = line
        if path:
            details["path"] = path
        super().__init__(message=message, code="PARSE_ERROR", details=details)


class FormatError(PLContourError):
    """Raised for well-formed input that breaks a format rule (zero denominator, non-increasing x)."""

    exit_code = 11

    def __init__(self, message: str = "Invalid format", details: dict = None):
        super().__init__(message=message, code="FORMAT_ERROR", details=details)


class ScheduleBudgetError(PLContourError):
    """Raised when the pigeonhole schedule search exhausts its depth budget."""

    exit_code = 12

    def __init__(
        self,
        message: str = "Schedule search exhausted its budget",
        stage: int = None,
        census: dict[str, list[int]] = None,
        details: dict = None
    ):
        details = details or {}
        self.stage = stage
        self.census = dict(census or {})
        if stage is not None:
            details["schedule_stage"] = stage
        if self.census:
            details["census"] = self.census
        super().__init__(message=message, code="SCHEDULE_BUDGET", details=details)
