"""
Configuration
=============

Central configuration for plcontour.
Uses pydantic-settings for environment variable loading and validation.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    """General application settings."""

    model_config = SettingsConfigDict(env_prefix="PLCONTOUR_")

    debug: bool = Field(default=False, description="Debug mode (console log renderer)")
    log_level: str = Field(default="WARNING", description="Logging level")


class OracleSettings(BaseSettings):
    """Brute-force oracle settings."""

    model_config = SettingsConfigDict(env_prefix="PLCONTOUR_ORACLE_")

    grid: int = Field(
        default=16,
        ge=1,
        description="Grid resolution d: multiples of 1/d are added to every partition"
    )


class ScheduleSettings(BaseSettings):
    """Simplicial scheduling and rewiring settings."""

    model_config = SettingsConfigDict(env_prefix="PLCONTOUR_SCHEDULE_")

    budget: int = Field(
        default=8,
        ge=1,
        description="Maximum number of bonding maps composed in one schedule stage"
    )
    jobs: int = Field(default=1, ge=1, description="Worker threads for independent work")


class PlotSettings(BaseSettings):
    """SVG figure settings."""

    model_config = SettingsConfigDict(env_prefix="PLCONTOUR_PLOT_")

    width: int = Field(default=400, description="Panel width in pixels")
    height: int = Field(default=400, description="Panel height in pixels")
    base_stroke: str = Field(default="#000000", description="Stroke of base curves")
    overlay_stroke: str = Field(default="#d62728", description="Stroke of overlay curves")
    stroke_width: float = Field(default=1.5, description="Curve stroke width")
    precision: int = Field(default=4, ge=0, description="Decimal places in coordinates")


class Settings(BaseSettings):
    """Combined settings for plcontour."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    # Nested settings
    app: AppSettings = Field(default_factory=AppSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    schedule: ScheduleSettings = Field(default_factory=ScheduleSettings)
    plot: PlotSettings = Field(default_factory=PlotSettings)

    fixture_dir: Optional[Path] = Field(
        default=None,
        validation_alias="PLCONTOUR_FIXTURE_DIR",
        description="Directory with golden fixture files (defaults to the bundled data)"
    )

    @property
    def resolved_fixture_dir(self) -> Path:
        """Get the fixture directory, falling back to the packaged data files."""
        return self.fixture_dir or Path(__file__).parent / "data"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Export commonly used settings
settings = get_settings()
