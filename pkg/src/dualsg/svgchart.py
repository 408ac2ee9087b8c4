"""Self-contained SVG line charts: axes, curves, legend, nothing else.

No external tooling, fonts or hrefs; the output is a single valid XML
document.  NaN samples split a curve into separate segments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class Series:
    label: str
    y: list
    color: str = "#1f77b4"
    dasharray: str | None = None    # e.g. "7,4" for a dashed curve


@dataclass
class Panel:
    title: str
    x_label: str
    y_label: str
    x: list
    series: list = field(default_factory=list)


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _ticks(lo: float, hi: float, n: int = 5):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _finite(values):
    return [v for v in values if v is not None and math.isfinite(v)]


def render_figure(panels: list, *, width: int = 880,
                  panel_height: int = 300) -> str:
    """Render stacked panels into one SVG document (returned as a string)."""
    if not panels:
        raise ValueError("at least one panel is required")
    margin_l, margin_r, margin_t, margin_b = 72, 24, 38, 52
    height = panel_height * len(panels)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
           f'height="{height}" viewBox="0 0 {width} {height}">',
           '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>']

    for idx, panel in enumerate(panels):
        top = idx * panel_height
        plot_l, plot_r = margin_l, width - margin_r
        plot_t, plot_b = top + margin_t, top + panel_height - margin_b
        xs = _finite(panel.x)
        ys = []
        for s in panel.series:
            ys.extend(_finite(s.y))
        if not xs or not ys:
            raise ValueError(f"panel {panel.title!r} has no finite data")
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        if y_hi == y_lo:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
        pad = 0.05 * (y_hi - y_lo)
        y_lo -= pad
        y_hi += pad

        def px(x):
            return plot_l + (x - x_lo) / (x_hi - x_lo) * (plot_r - plot_l)

        def py(y):
            return plot_b - (y - y_lo) / (y_hi - y_lo) * (plot_b - plot_t)

        out.append(f'<text x="{(plot_l + plot_r) / 2:.1f}" y="{top + 22}" '
                   f'text-anchor="middle" font-size="16" font-family="sans-serif">'
                   f'{_escape(panel.title)}</text>')
        for yv in _ticks(y_lo, y_hi):
            yy = py(yv)
            out.append(f'<line x1="{plot_l}" y1="{yy:.2f}" x2="{plot_r}" '
                       f'y2="{yy:.2f}" stroke="#dddddd" stroke-width="1"/>')
            out.append(f'<text x="{plot_l - 8}" y="{yy + 4:.2f}" text-anchor="end" '
                       f'font-size="11" font-family="sans-serif">{yv:.3g}</text>')
        for xv in _ticks(x_lo, x_hi):
            xx = px(xv)
            out.append(f'<line x1="{xx:.2f}" y1="{plot_b}" x2="{xx:.2f}" '
                       f'y2="{plot_b + 5}" stroke="#000000" stroke-width="1"/>')
            out.append(f'<text x="{xx:.2f}" y="{plot_b + 20}" text-anchor="middle" '
                       f'font-size="11" font-family="sans-serif">{xv:.3g}</text>')
        out.append(f'<line x1="{plot_l}" y1="{plot_b}" x2="{plot_r}" y2="{plot_b}" '
                   'stroke="#000000" stroke-width="1.5"/>')
        out.append(f'<line x1="{plot_l}" y1="{plot_t}" x2="{plot_l}" y2="{plot_b}" '
                   'stroke="#000000" stroke-width="1.5"/>')
        out.append(f'<text x="{(plot_l + plot_r) / 2:.1f}" y="{plot_b + 40}" '
                   f'text-anchor="middle" font-size="13" font-family="sans-serif">'
                   f'{_escape(panel.x_label)}</text>')
        out.append(f'<text x="{plot_l - 52}" y="{(plot_t + plot_b) / 2:.1f}" '
                   f'text-anchor="middle" font-size="13" font-family="sans-serif" '
                   f'transform="rotate(-90 {plot_l - 52} {(plot_t + plot_b) / 2:.1f})">'
                   f'{_escape(panel.y_label)}</text>')

        for s in panel.series:
            dash = f' stroke-dasharray="{s.dasharray}"' if s.dasharray else ""
            segment: list[str] = []
            segments: list[list[str]] = []
            for xv, yv in zip(panel.x, s.y):
                if yv is None or not math.isfinite(yv):
                    if len(segment) > 1:
                        segments.append(segment)
                    segment = []
                    continue
                segment.append(f"{px(xv):.2f},{py(yv):.2f}")
            if len(segment) > 1:
                segments.append(segment)
            for seg in segments:
                out.append(f'<polyline fill="none" stroke="{s.color}" '
                           f'stroke-width="1.8"{dash} points="{" ".join(seg)}"/>')

        legend_x = plot_r - 170
        legend_y = plot_t + 10
        for li, s in enumerate(panel.series):
            ly = legend_y + 18 * li
            dash = f' stroke-dasharray="{s.dasharray}"' if s.dasharray else ""
            out.append(f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 26}" '
                       f'y2="{ly}" stroke="{s.color}" stroke-width="2"{dash}/>')
            out.append(f'<text x="{legend_x + 32}" y="{ly + 4}" font-size="12" '
                       f'font-family="sans-serif">{_escape(s.label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
