"""
Report Schemas
==============

Pydantic models for certificates and verification reports.

Rationals are carried as ``p/q`` strings so that JSON output stays exact.
"""

from typing import Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of one named verification check."""

    name: str
    passed: bool
    witness: Optional[str] = Field(default=None, description="Counterexample on failure")
    detail: Optional[str] = Field(default=None)


class BridgedReport(BaseModel):
    """Independent re-check of a bridged factor."""

    passed: bool
    checks: list[CheckResult] = Field(default_factory=list)
    b1: list[int] = Field(default_factory=list, description="Bridged right contour indices")
    b2: list[int] = Field(default_factory=list, description="Bridged left contour indices")

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]


class OrientationReport(BaseModel):
    """Orientations present among the radial departures of one map."""

    index: int = Field(description="1-based position of the map in its prefix")
    orientations: str = Field(description="none, positive-only, negative-only or both")
    positive_witness: Optional[str] = Field(default=None)
    negative_witness: Optional[str] = Field(default=None)

    @property
    def zigzag_free(self) -> bool:
        return self.orientations != "both"


class ZigzagReport(BaseModel):
    """Zig-zag freeness of every map of a prefix."""

    certificate: bool
    maps: list[OrientationReport] = Field(default_factory=list)


class ChainReport(BaseModel):
    """Same-contour chain check: t(f_n) = t(f_n∘f_(n+1)) for consecutive maps."""

    passed: bool
    first_failure: Optional[int] = Field(default=None, description="1-based index n")
    degenerate: Optional[int] = Field(
        default=None, description="First map with a constant side, if any"
    )


class RewireCertificate(BaseModel):
    """Certificate for one rewired map s̃_n∘t_(n+2)."""

    index: int = Field(description="Odd level n")
    factorization: bool = Field(description="t_n∘s̃_n = f_n∘f_(n+1)")
    zigzag: OrientationReport
    bridged: BridgedReport

    @property
    def passed(self) -> bool:
        return (
            self.factorization
            and self.bridged.passed
            and self.zigzag.orientations in ("none", "positive-only")
        )


class RewireSummary(BaseModel):
    """All certificates produced by one rewire run."""

    passed: bool
    certificates: list[RewireCertificate] = Field(default_factory=list)
    trailing: list[int] = Field(
        default_factory=list, description="Levels no rewired map draws on (n, n+1 or n+2)"
    )


class SimplicialViolation(BaseModel):
    """One violated clause of the simplicial-system definition."""

    level: int
    clause: str = Field(description="image or component")
    component: Optional[list[str]] = Field(default=None)
    detail: str


class SimplicialReport(BaseModel):
    passed: bool
    violations: list[SimplicialViolation] = Field(default_factory=list)


class ScheduleSummary(BaseModel):
    """Cut indices, the contour-factor key of each stage and any levels left over."""

    cuts: list[int]
    keys: list[str] = Field(default_factory=list)
    unscheduled: list[int] = Field(
        default_factory=list, description="Levels beyond the final cut"
    )


class PipelineReport(BaseModel):
    """End-to-end outcome of the simplicial pipeline."""

    passed: bool
    verdict: Optional[str] = Field(default=None, description="endpoint, arc-or-point or constant-side")
    simplicial: Optional[SimplicialReport] = Field(default=None)
    schedule: Optional[ScheduleSummary] = Field(default=None)
    rewire: Optional[RewireSummary] = Field(default=None)
