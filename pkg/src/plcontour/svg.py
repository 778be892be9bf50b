"""
SVG Figures
===========

Deterministic SVG rendering of PL maps: one square panel per figure part,
base curves in black, overlays (ŝ, s̃) drawn above them in the overlay
stroke, contour points marked, bridged intervals shaded.

Coordinates are exact rationals rounded half-even to a fixed number of
decimals, so identical input gives byte-identical output.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .bridging import ProvenanceInterval
from .config import settings
from .contour import contour_points
from .plmap import PLMap, format_scalar
from .utils.exceptions import DegenerateSideError, DomainError
from .utils.logger import get_logger

logger = get_logger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN = 24
GAP = 16
MARK_RADIUS = 3


@dataclass(frozen=True)
class PlotStyle:
    """Strokes, sizes and rounding of a figure."""

    width: int = 400
    height: int = 400
    base_stroke: str = "#000000"
    overlay_stroke: str = "#d62728"
    stroke_width: float = 1.5
    precision: int = 4
    shade: str = "#fde0dd"

    @classmethod
    def from_settings(cls) -> "PlotStyle":
        plot = settings.plot
        return cls(
            width=plot.width,
            height=plot.height,
            base_stroke=plot.base_stroke,
            overlay_stroke=plot.overlay_stroke,
            stroke_width=plot.stroke_width,
            precision=plot.precision,
        )


@dataclass(frozen=True)
class PlotLayer:
    f: PLMap
    role: str = "base"
    label: Optional[str] = None


@dataclass(frozen=True)
class Panel:
    layers: tuple[PlotLayer, ...]
    title: Optional[str] = None
    provenance: tuple[ProvenanceInterval, ...] = field(default_factory=tuple)

    @classmethod
    def of(
        cls,
        maps: Iterable[Union[PLMap, tuple[PLMap, str]]],
        title: Optional[str] = None,
        provenance: Iterable[ProvenanceInterval] = (),
    ) -> "Panel":
        layers = tuple(
            PlotLayer(*item) if isinstance(item, tuple) else PlotLayer(item)
            for item in maps
        )
        return cls(layers, title, tuple(provenance))


def decimal(value: Fraction, precision: int) -> str:
    """Exact decimal rendering of a rational rounded to ``precision`` places."""
    scaled = round(value * 10**precision)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**precision)
    if precision == 0 or frac == 0:
        return f"{sign}{whole}"
    digits = str(frac).rjust(precision, "0").rstrip("0")
    return f"{sign}{whole}.{digits}"


def _props(attrs: dict[str, object]) -> str:
    return " ".join(f'{key.replace("_", "-")}="{value}"' for key, value in attrs.items())


def _element(tag: str, inner: Optional[str] = None, **attrs: object) -> str:
    props = _props(attrs)
    pre = " " if props else ""
    if inner is None:
        return f"<{tag}{pre}{props} />"
    return f"<{tag}{pre}{props}>{inner}</{tag}>"


class _Frame:
    """Maps a rational box onto one panel's pixel rectangle."""

    def __init__(self, left: int, top: int, style: PlotStyle, layers: Sequence[PlotLayer]):
        self.left, self.top, self.style = left, top, style
        self.x0 = min(layer.f.domain[0] for layer in layers)
        self.x1 = max(layer.f.domain[1] for layer in layers)
        self.y0 = min(layer.f.codomain[0] for layer in layers)
        self.y1 = max(layer.f.codomain[1] for layer in layers)

    def x(self, value: Fraction) -> str:
        px = self.left + (value - self.x0) / (self.x1 - self.x0) * self.style.width
        return decimal(px, self.style.precision)

    def y(self, value: Fraction) -> str:
        span = self.y1 - self.y0 or 1
        py = self.top + (self.y1 - value) / span * self.style.height
        return decimal(py, self.style.precision)


def _axes(frame: _Frame) -> list[str]:
    style = frame.style
    parts = [
        _element(
            "rect",
            x=frame.left,
            y=frame.top,
            width=style.width,
            height=style.height,
            fill="none",
            stroke="#999999",
        )
    ]
    zero = Fraction(0)
    if frame.y0 < zero < frame.y1:
        parts.append(
            _element(
                "line",
                x1=frame.x(frame.x0),
                y1=frame.y(zero),
                x2=frame.x(frame.x1),
                y2=frame.y(zero),
                stroke="#cccccc",
            )
        )
    if frame.x0 < zero < frame.x1:
        parts.append(
            _element(
                "line",
                x1=frame.x(zero),
                y1=frame.y(frame.y0),
                x2=frame.x(zero),
                y2=frame.y(frame.y1),
                stroke="#cccccc",
            )
        )
    return parts


def _curve(frame: _Frame, layer: PlotLayer) -> str:
    style = frame.style
    stroke = style.overlay_stroke if layer.role == "overlay" else style.base_stroke
    points = " ".join(f"{frame.x(x)},{frame.y(y)}" for x, y in layer.f.points)
    attrs: dict[str, object] = dict(
        points=points, fill="none", stroke=stroke, stroke_width=style.stroke_width
    )
    if layer.label:
        attrs["data_label"] = layer.label
    attrs["class"] = layer.role
    return _element("polyline", **attrs)


def _contour_marks(frame: _Frame, f: PLMap) -> list[str]:
    try:
        data = contour_points(f)
    except (DegenerateSideError, DomainError):
        return []
    marks = []
    bottom = frame.y(frame.y0)
    for record in (*data.right, *data.left):
        cx = frame.x(record.point)
        marks.append(
            _element(
                "circle",
                cx=cx,
                cy=frame.y(record.value),
                r=MARK_RADIUS,
                fill=frame.style.base_stroke,
            )
        )
        marks.append(
            _element(
                "text",
                format_scalar(record.point),
                x=cx,
                y=bottom,
                font_size=9,
                text_anchor="middle",
                dy=12,
            )
        )
    return marks


def _shading(frame: _Frame, provenance: Sequence[ProvenanceInterval]) -> list[str]:
    parts = []
    for interval in provenance:
        if interval.tag == "original":
            continue
        parts.append(
            _element(
                "rect",
                x=frame.x(interval.start),
                y=frame.top,
                width=decimal(
                    (interval.end - interval.start)
                    / (frame.x1 - frame.x0)
                    * frame.style.width,
                    frame.style.precision,
                ),
                height=frame.style.height,
                fill=frame.style.shade,
                data_tag=interval.tag,
            )
        )
    return parts


def _panel(panel: Panel, left: int, top: int, style: PlotStyle) -> str:
    frame = _Frame(left, top, style, panel.layers)
    parts = _shading(frame, panel.provenance) + _axes(frame)
    ordered = sorted(panel.layers, key=lambda layer: layer.role == "overlay")
    parts.extend(_curve(frame, layer) for layer in ordered)
    for layer in panel.layers:
        if layer.role == "base":
            parts.extend(_contour_marks(frame, layer.f))
    if panel.title:
        parts.append(
            _element(
                "text",
                panel.title,
                x=left + style.width // 2,
                y=top - 6,
                font_size=12,
                text_anchor="middle",
            )
        )
    return _element("g", "\n" + "\n".join(parts) + "\n")


def plot_svg(
    panels: Sequence[Union[Panel, PLMap]], style: Optional[PlotStyle] = None
) -> str:
    """
    Render panels side by side as one SVG document.

    Args:
        panels: Panels, or bare maps drawn as single-curve panels
        style: Plot style (defaults to the configured one)

    Returns:
        SVG text
    """
    style = style or PlotStyle.from_settings()
    panels = [p if isinstance(p, Panel) else Panel.of([p]) for p in panels]
    if not panels:
        raise DomainError("Nothing to plot")
    width = 2 * MARGIN + len(panels) * style.width + (len(panels) - 1) * GAP
    height = 2 * MARGIN + style.height
    body = "\n".join(
        _panel(panel, MARGIN + k * (style.width + GAP), MARGIN, style)
        for k, panel in enumerate(panels)
    )
    logger.debug("figure rendered", panels=len(panels))
    return _element(
        "svg", "\n" + body + "\n", width=width, height=height, xmlns=SVG_NS
    ) + "\n"


def save_svg(path: Union[str, Path], panels: Sequence[Union[Panel, PLMap]], style: Optional[PlotStyle] = None) -> Path:
    path = Path(path)
    path.write_text(plot_svg(panels, style), encoding="utf-8")
    return path
