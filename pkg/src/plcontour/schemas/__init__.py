"""
Schemas Module
==============

Pydantic models for reports and certificates.
"""

from .reports import (
    BridgedReport,
    ChainReport,
    CheckResult,
    OrientationReport,
    PipelineReport,
    RewireCertificate,
    RewireSummary,
    ScheduleSummary,
    SimplicialReport,
    SimplicialViolation,
    ZigzagReport,
)

__all__ = [
    "BridgedReport",
    "ChainReport",
    "CheckResult",
    "OrientationReport",
    "PipelineReport",
    "RewireCertificate",
    "RewireSummary",
    "ScheduleSummary",
    "SimplicialReport",
    "SimplicialViolation",
    "ZigzagReport",
]
