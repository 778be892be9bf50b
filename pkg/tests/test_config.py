"""
Configuration and Error Tests
=============================
"""

import json
from fractions import Fraction

import pytest

from plcontour.config import OracleSettings, ScheduleSettings, Settings
from plcontour.utils.exceptions import (
    DomainError,
    HypothesisError,
    InvariantViolationError,
    ParseError,
    PLContourError,
    ScheduleBudgetError,
    ThreadError,
)
from plcontour.utils.logger import LogContext, get_logger, setup_logging


class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.oracle.grid == 16
        assert settings.schedule.budget == 8
        assert settings.plot.precision == 4

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("PLCONTOUR_ORACLE_GRID", "32")
        monkeypatch.setenv("PLCONTOUR_SCHEDULE_JOBS", "4")
        assert OracleSettings().grid == 32
        assert ScheduleSettings().jobs == 4

    def test_fixture_dir_defaults_to_package_data(self):
        assert (Settings().resolved_fixture_dir / "W.plmap").exists()


class TestErrors:
    @pytest.mark.parametrize(
        "error, code, exit_code",
        [
            (DomainError("bad"), "DOMAIN_ERROR", 3),
            (HypothesisError(failed=["N >= 3"]), "HYPOTHESIS_FAILED", 7),
            (InvariantViolationError(check="factorization"), "INVARIANT_VIOLATION", 8),
            (ThreadError(level=2), "THREAD_ERROR", 9),
            (ParseError(line=4), "PARSE_ERROR", 10),
            (ScheduleBudgetError(stage=1), "SCHEDULE_BUDGET", 12),
        ],
    )
    def test_codes(self, error, code, exit_code):
        assert isinstance(error, PLContourError)
        assert error.code == code
        assert error.exit_code == exit_code

    def test_to_dict(self):
        error = HypothesisError("Not met", failed=["s(a) = y+"])
        assert error.to_dict() == {
            "error": {
                "code": "HYPOTHESIS_FAILED",
                "message": "Not met",
                "details": {"failed": ["s(a) = y+"]},
            }
        }

    def test_details_carry_context(self):
        assert ThreadError(level=2).details == {"level": 2}
        assert ScheduleBudgetError(stage=3, census={"k": [2]}).details == {
            "schedule_stage": 3,
            "census": {"k": [2]},
        }


class TestLogging:
    def test_json_lines_on_stderr(self, capsys):
        setup_logging("INFO", debug=False)
        with LogContext(stage="schedule", index=2):
            get_logger("plcontour.test").info("stage composed", keys=3)
        captured = capsys.readouterr()
        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["event"] == "stage composed"
        assert record["stage"] == "schedule"
        assert record["index"] == 2
        assert record["keys"] == 3
        assert record["level"] == "info"

    def test_level_filters(self, capsys):
        setup_logging("ERROR", debug=False)
        get_logger("plcontour.test").info("hidden")
        assert "hidden" not in capsys.readouterr().err

    def test_rationals_render_exactly(self, capsys):
        setup_logging("INFO", debug=False)
        get_logger("plcontour.test").info("reach", value=Fraction(1, 3), cuts=(Fraction(1), Fraction(-1, 2)))
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["value"] == "1/3"
        assert record["cuts"] == ["1", "-1/2"]

    def test_nested_context_restores_outer_stage(self, capsys):
        setup_logging("INFO", debug=False)
        logger = get_logger("plcontour.test")
        with LogContext(stage="pipeline"):
            with LogContext(stage="schedule", index=1):
                logger.info("inner")
            logger.info("outer")
        lines = capsys.readouterr().err.strip().splitlines()
        inner, outer = (json.loads(line) for line in lines[-2:])
        assert inner["stage"] == "schedule"
        assert outer["stage"] == "pipeline"
        assert "index" not in outer
