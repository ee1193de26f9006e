"""Minimal SVG 1.1 line charts, no plotting dependencies.

Deterministic by construction: fixed canvas, fixed tick count, and all
coordinates formatted with fixed precision, so the same data always
renders to the same bytes.  Handles negative values (the bias-sweep
difference curve lives at or below zero).
"""

from __future__ import annotations

_WIDTH = 960
_HEIGHT = 600
_MARGIN_LEFT = 80
_MARGIN_RIGHT = 200
_MARGIN_TOP = 60
_MARGIN_BOTTOM = 70
_TICKS = 5

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"]


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _span(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = 1.0 if lo == 0.0 else abs(lo) * 0.5
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def line_chart(
    series: list[tuple[str, list[tuple[float, float]]]],
    title: str,
    x_label: str,
    y_label: str,
) -> str:
    """Render labelled (x, y) series as one SVG document string."""
    if not series or all(not pts for _, pts in series):
        raise ValueError("nothing to plot")
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x_lo, x_hi = _span(xs)
    y_lo, y_hi = _span(ys)

    plot_left = _MARGIN_LEFT
    plot_right = _WIDTH - _MARGIN_RIGHT
    plot_top = _MARGIN_TOP
    plot_bottom = _HEIGHT - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return plot_left + (x - x_lo) / (x_hi - x_lo) * (plot_right - plot_left)

    def py(y: float) -> float:
        return plot_bottom - (y - y_lo) / (y_hi - y_lo) * (plot_bottom - plot_top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="32" text-anchor="middle" font-size="20" '
        f'font-family="monospace">{_escape(title)}</text>',
    ]

    for i in range(_TICKS + 1):
        yv = y_lo + (y_hi - y_lo) * i / _TICKS
        ypix = py(yv)
        out.append(
            f'<line x1="{plot_left}" y1="{ypix:.2f}" x2="{plot_right}" y2="{ypix:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{plot_left - 8}" y="{ypix + 4:.2f}" text-anchor="end" font-size="12" '
            f'font-family="monospace">{yv:.4g}</text>'
        )
        xv = x_lo + (x_hi - x_lo) * i / _TICKS
        xpix = px(xv)
        out.append(
            f'<line x1="{xpix:.2f}" y1="{plot_bottom}" x2="{xpix:.2f}" y2="{plot_bottom + 6}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{xpix:.2f}" y="{plot_bottom + 22}" text-anchor="middle" font-size="12" '
            f'font-family="monospace">{xv:.4g}</text>'
        )

    # zero line, when it crosses the plot
    if y_lo < 0.0 < y_hi:
        zero = py(0.0)
        out.append(
            f'<line x1="{plot_left}" y1="{zero:.2f}" x2="{plot_right}" y2="{zero:.2f}" '
            'stroke="#999999" stroke-width="1" stroke-dasharray="4,4"/>'
        )

    out.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="2"/>'
    )
    out.append(
        f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="2"/>'
    )

    legend_y = plot_top + 10
    for idx, (label, pts) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')
        ly = legend_y + idx * 22
        out.append(
            f'<line x1="{plot_right + 16}" y1="{ly}" x2="{plot_right + 40}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{plot_right + 46}" y="{ly + 4}" text-anchor="start" font-size="13" '
            f'font-family="monospace">{_escape(label)}</text>'
        )

    out.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{_HEIGHT - 20}" text-anchor="middle" '
        f'font-size="14" font-family="monospace">{_escape(x_label)}</text>'
    )
    mid_y = (plot_top + plot_bottom) / 2
    out.append(
        f'<text x="24" y="{mid_y:.1f}" text-anchor="middle" font-size="14" font-family="monospace" '
        f'transform="rotate(-90 24 {mid_y:.1f})">{_escape(y_label)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
