"""
Logging Utilities
=================

structlog setup for plcontour. Records go to stderr as JSON lines (or a
console rendering in debug mode); stdout carries command output only.
Rational values in event fields are rendered exactly as ``p/q``.
"""

import logging
import sys
from fractions import Fraction
from typing import Any, Optional

import structlog

from ..config import settings


def _rational(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_rational(item) for item in value]
    return value


def render_rationals(_, __, event_dict: dict) -> dict:
    """Processor: Fractions (also inside lists and tuples) become exact strings."""
    return {key: _rational(value) for key, value in event_dict.items()}


def setup_logging(log_level: Optional[str] = None, debug: Optional[bool] = None) -> None:
    """
    Configure structured logging.

    Args:
        log_level: Override log level (default: from settings)
        debug: Override console rendering (default: from settings)
    """
    level = log_level or settings.app.log_level
    use_console = settings.app.debug if debug is None else debug
    numeric_level = getattr(logging, level.upper(), logging.WARNING)

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level)

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        render_rationals,
        structlog.processors.StackInfoRenderer(),
        structlog.dev.set_exc_info,
        structlog.processors.TimeStamper(fmt="iso"),
    ]
    if use_console:
        processors.append(structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()))
    else:
        processors.extend([
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(sort_keys=True),
        ])

    # not cached: each CLI run may rebind stderr
    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    return structlog.get_logger(name)


class LogContext:
    """
    Bind context (``stage``, ``index``) to every record inside the block.

    ``level`` is reserved by the log-level processor; use ``index``.

    Usage:
        with LogContext(stage="bridging-I", index=2):
            logger.info("lift built")
    """

    def __init__(self, **context: Any):
        self.context = context
        self._tokens: dict = {}

    def __enter__(self) -> "LogContext":
        self._tokens = structlog.contextvars.bind_contextvars(**self.context)
        return self

    def __exit__(self, *args) -> None:
        # restores outer bindings of the same keys
        structlog.contextvars.reset_contextvars(**self._tokens)
