"""Minimal static SVG line charts (log-scale y axis by default)."""

from __future__ import annotations

import math
from pathlib import Path

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def line_chart(series: dict[str, list[tuple[float, float]]], path, title: str = "",
               logy: bool = True, width: int = 640, height: int = 400) -> Path:
    pad_l, pad_r, pad_t, pad_b = 60, 150, 30, 40
    pts = [(x, y) for data in series.values() for x, y in data if not logy or y > 0]
    if not pts:
        raise ValueError("nothing to plot")
    ty = (lambda y: math.log10(y)) if logy else (lambda y: y)
    xs = [x for x, _ in pts]
    ys = [ty(y) for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b

    def sx(x):
        return pad_l + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return pad_t + ph - (ty(y) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{_esc(title)}</text>',
        f'<line x1="{pad_l}" y1="{pad_t + ph}" x2="{pad_l + pw}" y2="{pad_t + ph}" stroke="black"/>',
        f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + ph}" stroke="black"/>',
        f'<text x="{pad_l}" y="{height - 10}">{x0:g}</text>',
        f'<text x="{pad_l + pw}" y="{height - 10}" text-anchor="end">{x1:g}</text>',
        f'<text x="{pad_l - 5}" y="{pad_t + ph}" text-anchor="end">{_ylabel(y0, logy)}</text>',
        f'<text x="{pad_l - 5}" y="{pad_t + 10}" text-anchor="end">{_ylabel(y1, logy)}</text>',
    ]
    for i, (name, data) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in data if not logy or y > 0)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = pad_t + 15 * i + 10
        out.append(f'<line x1="{width - pad_r + 10}" y1="{ly}" x2="{width - pad_r + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{width - pad_r + 35}" y="{ly + 4}">{_esc(name)}</text>')
    out.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(out) + "\n")
    return path


def _ylabel(v: float, logy: bool) -> str:
    return f"1e{v:.1f}" if logy else f"{v:g}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
