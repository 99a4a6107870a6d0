# this_file: src/fraccalc/output.py
"""Deterministic CSV, SVG and JSON writers.

Data files carry no timestamps: a ``# fraccalc <version>`` line, a header row
and numbers with 12 significant digits, LF line endings throughout. SVG charts
use a fixed 800×600 viewBox with linear axes and one polyline per series.
"""

import json
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fraccalc import __version__
from fraccalc.errors import SpecError

SVG_WIDTH = 800
SVG_HEIGHT = 600
_MARGIN_LEFT = 80
_MARGIN_RIGHT = 30
_MARGIN_TOP = 50
_MARGIN_BOTTOM = 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def format_number(value: Any) -> str:
    """12 significant digits; booleans as ``true``/``false``; ``None`` as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int | float):
        number = float(value)
        if math.isnan(number):
            return "nan"
        return f"{number:.12g}"
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = [f"# fraccalc {__version__}", ",".join(header)]
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Series:
    """One polyline of a chart."""

    label: str
    x: Sequence[float]
    y: Sequence[float]


def _finite_range(values: list[float]) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if lo == hi:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(
    title: str,
    series: Sequence[Series],
    *,
    x_label: str = "x",
    y_label: str = "value",
    hline: float | None = None,
) -> str:
    """Line chart with axes, tick labels, a legend and an optional horizontal rule."""
    plot_w = SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    xs = [float(v) for s in series for v in s.x]
    ys = [float(v) for s in series for v in s.y]
    if hline is not None:
        ys.append(hline)
    x_lo, x_hi = _finite_range(xs)
    y_lo, y_hi = _finite_range(ys)

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    bottom = _MARGIN_TOP + plot_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{SVG_WIDTH / 2:.1f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{_escape(title)}</text>',
        f'<line x1="{_MARGIN_LEFT}" y1="{bottom}" x2="{_MARGIN_LEFT + plot_w}" y2="{bottom}" stroke="#000000"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" y2="{bottom}" stroke="#000000"/>',
    ]
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        fy = y_lo + (y_hi - y_lo) * i / 4
        parts.append(
            f'<text x="{px(fx):.1f}" y="{bottom + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{format_number(float(f"{fx:.4g}"))}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{py(fy) + 4:.1f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{format_number(float(f"{fy:.4g}"))}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" y="{SVG_HEIGHT - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{_escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.1f})">{_escape(y_label)}</text>'
    )
    if hline is not None:
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{py(hline):.1f}" x2="{_MARGIN_LEFT + plot_w}" y2="{py(hline):.1f}" '
            'stroke="#7f7f7f" stroke-dasharray="6 4"/>'
        )
    for index, s in enumerate(series):
        color = _COLORS[index % len(_COLORS)]
        points = " ".join(
            f"{px(float(x)):.2f},{py(float(y)):.2f}"
            for x, y in zip(s.x, s.y, strict=True)
            if math.isfinite(float(x)) and math.isfinite(float(y))
        )
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        legend_y = _MARGIN_TOP + 10 + 18 * index
        legend_x = _MARGIN_LEFT + plot_w - 160
        parts.append(
            f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 24}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 30}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="12">{_escape(s.label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_text(text: str, output: str | Path | None) -> None:
    """Write once to ``output``, or to standard output when it is ``None``.

    Raises:
        SpecError: If ``output`` cannot be written.
    """
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        msg = f"cannot write {output}: {e.strerror or e}"
        raise SpecError(msg) from e
