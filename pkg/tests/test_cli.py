"""
Command Line Tests
==================

Subcommands run through click's test runner against the bundled files.
"""

import json

import pytest

from plcontour import __version__
from plcontour.cli import CERTIFICATE_FAILED, cli
from plcontour.formats import read_document
from plcontour.plmap import PLMap, compose


@pytest.fixture
def invoke(runner):
    """Run a subcommand with logging kept off the captured output."""

    def run(*args):
        return runner.invoke(cli, ["--log-level", "ERROR", *map(str, args)])

    return run


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_contour(invoke, data_dir):
    result = invoke("contour", data_dir / "M.plmap")
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "right 1 1/2 1 positive",
        "right 2 1 -1/2 negative",
        "left 1 -1 -1 negative",
    ]


def test_contour_with_factor(invoke, data_dir, tmp_path):
    out = tmp_path / "report.txt"
    result = invoke("contour", data_dir / "M.plmap", "--factor", "--out", out)
    assert result.exit_code == 0
    text = out.read_text(encoding="utf-8")
    assert text.endswith("plmap\n-1 -1\n0 0\n1/2 1\n1 -1/2\n")


def test_compose(invoke, data_dir, tmp_path, w_map):
    out = tmp_path / "ww.plmap"
    result = invoke("compose", data_dir / "W.plmap", data_dir / "W.plmap", "--out", out)
    assert result.exit_code == 0
    assert read_document(out) == compose(w_map, w_map)


def test_lift(invoke, data_dir, tmp_path, w_map):
    result = invoke("lift", data_dir / "M.plmap", "--out", tmp_path)
    assert result.exit_code == 0
    assert read_document(tmp_path / "t.plmap") == w_map
    assert read_document(tmp_path / "s.plmap") == PLMap(
        [(-1, -1), ("1/4", "1/4"), ("3/8", "1/8"), ("1/2", "1/2"), (1, 1)]
    )


class TestCheck:
    def test_zigzag_free(self, invoke, data_dir):
        result = invoke("check", data_dir / "w5.system")
        assert result.exit_code == 0
        assert json.loads(result.output)["certificate"] is True

    def test_both_orientations_fail(self, invoke, data_dir):
        result = invoke("check", data_dir / "ZZ.plmap")
        assert result.exit_code == CERTIFICATE_FAILED


def test_bridge(invoke, data_dir, tmp_path):
    paths = [data_dir / f"ex4_f{k}.plmap" for k in (1, 2, 3)]
    result = invoke("bridge", *paths, "--out", tmp_path)
    assert result.exit_code == 0
    assert read_document(tmp_path / "s_tilde.plmap") == read_document(
        data_dir / "ex4_s_tilde.plmap"
    )
    certificate = json.loads((tmp_path / "certificate.json").read_text(encoding="utf-8"))
    assert certificate["passed"] is True
    assert (tmp_path / "s_tilde.provenance").read_text(encoding="utf-8").startswith("provenance\n")


def test_rewire(invoke, data_dir, tmp_path):
    result = invoke("rewire", data_dir / "w5.system", "--out", tmp_path)
    assert result.exit_code == 0
    assert len(read_document(tmp_path / "rewired.system")) == 2
    summary = json.loads((tmp_path / "certificates.json").read_text(encoding="utf-8"))
    assert summary["trailing"] == []


class TestSimplicial:
    def test_check_phase(self, invoke, data_dir):
        result = invoke("simplicial", data_dir / "tent3.system", "--phase", "check")
        assert result.exit_code == 0
        assert json.loads(result.output)["passed"] is True

    def test_endpoint_verdict(self, invoke, data_dir):
        result = invoke(
            "simplicial", data_dir / "tent3.system", "--phase", "normalize", "--thread=-1 -1 -1 -1"
        )
        assert result.exit_code == 0
        assert json.loads(result.output) == {"verdict": "endpoint"}

    def test_budget_exhausted(self, invoke, data_dir):
        result = invoke("simplicial", data_dir / "tent3.system", "--thread", "1/3,1/3,1/3,1/3")
        assert result.exit_code == 12
        assert "SCHEDULE_BUDGET" in result.output

    def test_plain_system_rejected(self, invoke, data_dir):
        result = invoke("simplicial", data_dir / "w5.system")
        assert result.exit_code == 3


def test_oracle(invoke, data_dir):
    result = invoke("oracle", data_dir / "ex4.system", "--grid", "8")
    assert result.exit_code == 0
    assert json.loads(result.output)["agree"] is True


def test_plot_with_overlay(invoke, data_dir, tmp_path):
    out = tmp_path / "figure.svg"
    result = invoke(
        "plot",
        data_dir / "W.plmap",
        data_dir / "M.plmap",
        "--overlay",
        data_dir / "ID.plmap",
        "--overlay-panel",
        "2",
        "--out",
        out,
    )
    assert result.exit_code == 0
    svg = out.read_text(encoding="utf-8")
    assert svg.count("<polyline") == 3
    assert svg.count('class="overlay"') == 1


def test_format_error_exit_code(invoke, tmp_path):
    bad = tmp_path / "bad.plmap"
    bad.write_text("plmap\n0 0\n1/0 1\n", encoding="utf-8")
    result = invoke("contour", bad)
    assert result.exit_code == 11
    assert "FORMAT_ERROR" in result.output
