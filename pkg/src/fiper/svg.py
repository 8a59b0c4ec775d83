"""Static SVG rendering of the two-panel view.

The left panel draws one importance bar per row (length scaled to the
view's largest |weight|, colored by sign); the right panel draws the
aligned distribution chart: a box plot for numerical features, a stacked
bar for categorical ones, with the predicate extent in yellow behind it
and a diamond marker at the observed value. Output is byte-deterministic
for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import ViewError
from .stats import CategoricalSummary, FiveNumber
from .view import FiperView

__all__ = ["Geometry", "render_svg", "DEFAULT_GEOMETRY"]

_LABEL_BUDGET = 26


@dataclass(frozen=True)
class Geometry:
    """Pixel layout knobs; both panels share row_height so rows align."""

    fi_panel_width: int = 280
    chart_panel_width: int = 440
    row_height: int = 34
    header_height: int = 46
    padding: int = 12
    panel_gap: int = 24

    def __post_init__(self):
        if min(self.fi_panel_width, self.chart_panel_width, self.row_height) <= 0:
            raise ViewError("panel widths and row height must be positive")
        if min(self.header_height, self.padding, self.panel_gap) < 0:
            raise ViewError("header, padding and gap must be nonnegative")


DEFAULT_GEOMETRY = Geometry()

_SEGMENT_SHADES = ("#c9c9c9", "#a8a8a8", "#878787", "#696969", "#4d4d4d")


def _fmt(value: float) -> str:
    text = f"{value:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def _truncate(label: str) -> str:
    if len(label) <= _LABEL_BUDGET:
        return label
    return label[:_LABEL_BUDGET - 1] + "…"


def _fi_panel(row, max_abs: float, geo: Geometry, palette) -> list[str]:
    label_space = geo.fi_panel_width * 0.58
    bar_area = geo.fi_panel_width - label_space - 6
    frac = abs(row.weight) / max_abs if max_abs > 0 else 0.0
    color = {
        "positive": palette.positive_color,
        "negative": palette.negative_color,
        "zero": palette.marker_color,
    }[row.weight_sign.value]
    mid = geo.row_height / 2
    bar_h = geo.row_height * 0.5
    parts = [
        '    <g class="fi">',
        f"      <title>{escape(row.feature)}</title>",
        f'      <text class="feature-label" x="0" y="{_fmt(mid + 4)}" '
        f'font-size="12">{escape(_truncate(row.feature))}</text>',
        f'      <rect class="fi-bar" x="{_fmt(label_space)}" '
        f'y="{_fmt(mid - bar_h / 2)}" width="{_fmt(bar_area * frac)}" '
        f'height="{_fmt(bar_h)}" fill={quoteattr(color)}/>',
        f'      <text class="fi-value" x="{_fmt(label_space - 6)}" '
        f'y="{_fmt(mid + 4)}" font-size="10" text-anchor="end">'
        f"{escape(_fmt_weight(row.weight))}</text>",
        "    </g>",
    ]
    return parts


def _fmt_weight(weight: float) -> str:
    return f"{weight:+.3f}"


def _numeric_chart(row, geo: Geometry, palette) -> list[str]:
    body = row.summary.body
    w = geo.chart_panel_width
    mid = geo.row_height / 2
    box_h = geo.row_height * 0.42
    axis = lambda norm: norm * w

    def x(value: float) -> float:
        if body.max == body.min:
            return axis(0.5)
        return axis((value - body.min) / (body.max - body.min))

    parts = []
    if row.highlight is not None:
        s0, s1 = axis(row.highlight.start), axis(row.highlight.end)
        parts.append(
            f'      <rect class="highlight" x="{_fmt(s0)}" y="1" '
            f'width="{_fmt(max(s1 - s0, 0.0))}" height="{_fmt(geo.row_height - 2)}" '
            f'fill={quoteattr(palette.highlight_color)}/>')
    parts.append(
        f'      <line class="whisker" x1="{_fmt(x(body.min))}" y1="{_fmt(mid)}" '
        f'x2="{_fmt(x(body.max))}" y2="{_fmt(mid)}" stroke="#555555"/>')
    for tip in (body.min, body.max):
        parts.append(
            f'      <line class="whisker-tip" x1="{_fmt(x(tip))}" '
            f'y1="{_fmt(mid - box_h / 2)}" x2="{_fmt(x(tip))}" '
            f'y2="{_fmt(mid + box_h / 2)}" stroke="#555555"/>')
    parts.append(
        f'      <rect class="box" x="{_fmt(x(body.q1))}" y="{_fmt(mid - box_h / 2)}" '
        f'width="{_fmt(max(x(body.q3) - x(body.q1), 0.0))}" height="{_fmt(box_h)}" '
        f'fill="#ffffff" stroke="#555555"/>')
    parts.append(
        f'      <line class="median" x1="{_fmt(x(body.median))}" '
        f'y1="{_fmt(mid - box_h / 2)}" x2="{_fmt(x(body.median))}" '
        f'y2="{_fmt(mid + box_h / 2)}" stroke="#555555"/>')
    return parts


def _categorical_chart(row, geo: Geometry, palette) -> list[str]:
    body = row.summary.body
    w = geo.chart_panel_width
    mid = geo.row_height / 2
    seg_h = geo.row_height * 0.42
    total = body.total
    parts = []
    cum = 0
    flags = row.highlight.flags if row.highlight is not None else None
    for i, (label, count) in enumerate(body.entries):
        x0 = cum / total * w
        seg_w = count / total * w
        cum += count
        if flags is not None and flags[i]:
            parts.append(
                f'      <rect class="highlight" x="{_fmt(x0)}" y="1" '
                f'width="{_fmt(seg_w)}" height="{_fmt(geo.row_height - 2)}" '
                f'fill={quoteattr(palette.highlight_color)}/>')
        shade = _SEGMENT_SHADES[i % len(_SEGMENT_SHADES)]
        parts.append(
            f'      <rect class="segment" x="{_fmt(x0)}" y="{_fmt(mid - seg_h / 2)}" '
            f'width="{_fmt(seg_w)}" height="{_fmt(seg_h)}" '
            f'fill={quoteattr(shade)} stroke="#ffffff" stroke-width="0.5">'
            f"<title>{escape(label)}: {count}</title></rect>")
    return parts


def _marker(row, geo: Geometry, palette) -> str:
    cx = row.marker.normalized * geo.chart_panel_width
    cy = geo.row_height / 2
    s = geo.row_height * 0.18
    d = (f"M {_fmt(cx)} {_fmt(cy - s)} L {_fmt(cx + s)} {_fmt(cy)} "
         f"L {_fmt(cx)} {_fmt(cy + s)} L {_fmt(cx - s)} {_fmt(cy)} Z")
    return (f'      <path class="marker" d="{d}" '
            f'fill={quoteattr(palette.marker_color)}/>')


def render_svg(view: FiperView, geometry: Geometry = DEFAULT_GEOMETRY) -> bytes:
    """Render the view to SVG 1.1 bytes.

    Every row is one ``<g class="row">`` holding the FI group and the
    chart group; both inherit the row's single vertical translate, so
    panels stay aligned by construction.
    """
    geo = geometry
    palette = view.options.palette
    width = geo.padding * 2 + geo.fi_panel_width + geo.panel_gap + geo.chart_panel_width
    height = geo.header_height + len(view.rows) * geo.row_height + geo.padding
    chart_x = geo.fi_panel_width + geo.panel_gap
    max_abs = max((abs(r.weight) for r in view.rows), default=0.0)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'  <g class="header" transform="translate({geo.padding},0)">',
        f'    <text x="0" y="20" font-size="13" font-weight="bold">'
        f"Feature importance</text>",
        f'    <text x="{chart_x}" y="20" font-size="13" font-weight="bold">'
        f"Value distribution</text>",
        f'    <text x="0" y="38" font-size="12">Prediction: '
        f"{escape(view.prediction)}</text>",
        "  </g>",
    ]
    for i, row in enumerate(view.rows):
        y = geo.header_height + i * geo.row_height
        lines.append(
            f'  <g class="row" data-feature={quoteattr(row.feature)} '
            f'transform="translate({geo.padding},{y})">')
        lines.extend(_fi_panel(row, max_abs, geo, palette))
        lines.append(f'    <g class="chart" transform="translate({chart_x},0)">')
        if isinstance(row.summary.body, FiveNumber):
            lines.extend(_numeric_chart(row, geo, palette))
        else:
            assert isinstance(row.summary.body, CategoricalSummary)
            lines.extend(_categorical_chart(row, geo, palette))
        lines.append(_marker(row, geo, palette))
        lines.append("    </g>")
        lines.append("  </g>")
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
