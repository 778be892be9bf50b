"""
Command Line
============

``plcontour`` command group. Each subcommand reads the text formats,
runs one module operation and writes its result; certificates are JSON.

Exit codes: 0 when every certificate passes, 2 when one fails, and the
error's own code (3 to 12) when an operation raises.
"""

import json
from functools import reduce
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .bridging import build_bridged_s
from .config import settings
from .contour import (
    contour_points,
    meandering_lift,
    radial_contour_factor,
    radial_departure_exists,
)
from .formats import (
    Document,
    format_contour_report,
    format_document,
    format_map,
    format_provenance,
    format_system,
    parse_provenance,
    read_document,
    write_text,
)
from .oracle import GridSpec, oracle_contour_points, oracle_factorization, oracle_radial_departures
from .plmap import Orientation, PLMap, Scalar, as_fraction, compose
from .simplicial import (
    NormalizedSystem,
    SimplicialSystem,
    Verdict,
    check_simplicial,
    find_schedule,
    normalize_point,
    pipeline,
)
from .svg import Panel, PlotLayer, plot_svg
from .systems import SystemPrefix, check_zigzag_free, rewire
from .utils.exceptions import DomainError, PLContourError
from .utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

CERTIFICATE_FAILED = 2


class PLContourGroup(click.Group):
    """Maps plcontour errors to their exit codes with a JSON body on stderr."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except PLContourError as exc:
            logger.warning("command failed", code=exc.code, message=exc.message)
            click.echo(json.dumps(exc.to_dict()), err=True)
            ctx.exit(exc.exit_code)


def _read(path: str) -> Document:
    return read_document(path)


def _read_map(path: str) -> PLMap:
    document = _read(path)
    if not isinstance(document, PLMap):
        raise DomainError("Expected a map file", details={"path": path})
    return document


def _read_system(path: str) -> SystemPrefix:
    document = _read(path)
    if isinstance(document, SimplicialSystem):
        return document.prefix
    if isinstance(document, PLMap):
        return SystemPrefix((document,))
    return document


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_text(out, text)
    else:
        click.echo(text, nl=False)


def _parse_thread(thread: Optional[str], levels: int) -> list[Scalar]:
    if thread is None:
        return [0] * levels
    return [as_fraction(token) for token in thread.replace(",", " ").split()]


@click.group(cls=PLContourGroup)
@click.version_option(__version__, prog_name="plcontour")
@click.option("--log-level", default=None, help="Logging level (default from settings)")
@click.option("--debug/--no-debug", default=None, help="Console log rendering")
def cli(log_level: Optional[str], debug: Optional[bool]) -> None:
    """Exact contour factorization, bridging and rewiring of PL interval maps."""
    setup_logging(log_level, debug)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--factor", is_flag=True, help="Also print the radial contour factor")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def contour(path: str, factor: bool, out: Optional[str]) -> None:
    """Print the contour points of a pointed map."""
    f = _read_map(path)
    text = format_contour_report(f)
    if factor:
        text += format_map(radial_contour_factor(f))
    _emit(text, out)


@cli.command(name="compose")
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def compose_cmd(paths: tuple[str, ...], out: Optional[str]) -> None:
    """Compose maps left to right: the first file is the outermost map."""
    maps = [g for path in paths for g in _read_system(path)]
    _emit(format_map(reduce(compose, maps)), out)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for t.plmap and s.plmap")
def lift(path: str, out: Optional[str]) -> None:
    """Factor a pointed map as t∘s with s the meandering lift."""
    f = _read_map(path)
    t, s = radial_contour_factor(f), meandering_lift(f)
    check = oracle_factorization(t, s, f)
    if out:
        write_text(Path(out) / "t.plmap", format_map(t))
        write_text(Path(out) / "s.plmap", format_map(s))
    else:
        click.echo(format_map(t) + format_map(s), nl=False)
    if not check:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def check(path: str) -> None:
    """Zig-zag certificate: no map has radial departures of both orientations."""
    report = check_zigzag_free(_read_system(path))
    click.echo(report.model_dump_json(indent=2))
    if not report.certificate:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command()
@click.argument("f1", type=click.Path(exists=True, dir_okay=False))
@click.argument("f2", type=click.Path(exists=True, dir_okay=False))
@click.argument("f3", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for s_tilde.plmap, provenance and certificate")
def bridge(f1: str, f2: str, f3: str, out: Optional[str]) -> None:
    """Build the bridged factor s̃ for three consecutive bonding maps."""
    bf = build_bridged_s(_read_map(f1), _read_map(f2), _read_map(f3))
    certificate = bf.report.model_dump_json(indent=2)
    if out:
        write_text(Path(out) / "s_tilde.plmap", format_map(bf.s_tilde))
        write_text(Path(out) / "s_tilde.provenance", format_provenance(bf.provenance))
        write_text(Path(out) / "certificate.json", certificate + "\n")
    else:
        click.echo(format_map(bf.s_tilde) + format_provenance(bf.provenance), nl=False)
    click.echo(certificate, err=out is None)
    if not bf.report.passed:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command(name="rewire")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", type=int, default=None, help="Worker threads for independent levels")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for rewired.system and certificates.json")
def rewire_cmd(path: str, jobs: Optional[int], out: Optional[str]) -> None:
    """Rewire a system prefix into maps without negative radial departures."""
    result = rewire(_read_system(path), jobs=jobs)
    summary = result.summary.model_dump_json(indent=2)
    if out:
        write_text(Path(out) / "rewired.system", format_system(result.rewired))
        write_text(Path(out) / "certificates.json", summary + "\n")
    else:
        click.echo(format_system(result.rewired), nl=False)
        click.echo(summary)
    for rule in result.coordinate_map.rules():
        logger.info("coordinate map", rule=rule)
    if not result.passed:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--phase",
    type=click.Choice(["check", "normalize", "schedule", "pipeline"]),
    default="pipeline",
)
@click.option("--thread", default=None, help="Thread coordinates x1 … x(N+1) (default: zeros)")
@click.option("--budget", type=int, default=None, help="Levels composed per schedule stage")
@click.option("--jobs", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def simplicial(
    path: str,
    phase: str,
    thread: Optional[str],
    budget: Optional[int],
    jobs: Optional[int],
    out: Optional[str],
) -> None:
    """Check, normalize, schedule or run the full simplicial pipeline."""
    system = _read(path)
    if not isinstance(system, SimplicialSystem):
        raise DomainError("Expected a simplicial system file (with S lines)", details={"path": path})
    budget = budget or settings.schedule.budget
    xs = _parse_thread(thread, len(system.sets))

    if phase == "check":
        report = check_simplicial(system)
        _emit(report.model_dump_json(indent=2) + "\n", out)
        passed = report.passed
    elif phase == "normalize":
        normalized = normalize_point(system, xs)
        if isinstance(normalized, Verdict):
            _emit(json.dumps({"verdict": str(normalized)}) + "\n", out)
        else:
            _emit(format_document(normalized.system), out)
        passed = True
    elif phase == "schedule":
        base = normalize_point(system, xs)
        if isinstance(base, NormalizedSystem):
            schedule = find_schedule(base.system, budget)
        else:
            schedule = base
        if isinstance(schedule, Verdict):
            _emit(json.dumps({"verdict": str(schedule)}) + "\n", out)
        else:
            _emit(schedule.summary().model_dump_json(indent=2) + "\n", out)
        passed = True
    else:
        result = pipeline(system, xs, budget, jobs)
        _emit(result.report().model_dump_json(indent=2) + "\n", out)
        passed = result.passed
    if not passed:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--grid", type=int, default=None, help="Grid resolution d")
def oracle(path: str, grid: Optional[int]) -> None:
    """Re-validate every map of a file against the definitional oracles."""
    spec = GridSpec(grid or settings.oracle.grid)
    disagreements = []
    for index, f in enumerate(_read_system(path), start=1):
        for g in (spec, spec.refine()):
            if oracle_contour_points(f, g) != contour_points(f):
                disagreements.append({"map": index, "check": "contour points", "grid": g.resolution})
            found = {w.orientation for w in oracle_radial_departures(f, g)}
            for orientation in Orientation:
                decided = radial_departure_exists(f, orientation) is not None
                if decided != (orientation in found):
                    disagreements.append(
                        {"map": index, "check": f"{orientation} radial departure", "grid": g.resolution}
                    )
        if not oracle_factorization(radial_contour_factor(f), meandering_lift(f), f):
            disagreements.append({"map": index, "check": "factorization"})
    click.echo(json.dumps({"agree": not disagreements, "disagreements": disagreements}, indent=2))
    if disagreements:
        raise click.exceptions.Exit(CERTIFICATE_FAILED)


@cli.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--overlay", type=click.Path(exists=True, dir_okay=False), default=None, help="Map drawn over the panel given by --overlay-panel")
@click.option("--overlay-panel", type=int, default=1, help="1-based panel receiving the overlay")
@click.option("--provenance", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def plot(
    paths: tuple[str, ...],
    overlay: Optional[str],
    overlay_panel: int,
    provenance: Optional[str],
    out: Optional[str],
) -> None:
    """Render maps side by side as SVG, optionally with an overlay curve."""
    maps = [g for path in paths for g in _read_system(path)]
    if not 1 <= overlay_panel <= len(maps):
        raise DomainError("Overlay panel out of range", details={"panel": overlay_panel})
    panels = []
    for k, f in enumerate(maps, start=1):
        layers = [PlotLayer(f)]
        intervals = ()
        if overlay and k == overlay_panel:
            layers.append(PlotLayer(_read_map(overlay), role="overlay"))
            if provenance:
                text = Path(provenance).read_text(encoding="utf-8")
                intervals = tuple(parse_provenance(text, provenance))
        panels.append(Panel(tuple(layers), provenance=intervals))
    _emit(plot_svg(panels), out)


def main() -> None:
    """Console entry point."""
    cli(prog_name="plcontour")


if __name__ == "__main__":
    main()
