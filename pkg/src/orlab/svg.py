"""Minimal log-log line plots written directly as SVG markup."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=170, top=40, bottom=50)
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _decades(lo: float, hi: float) -> list[int]:
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def loglog_svg(series: dict, title: str, xlabel: str, ylabel: str) -> str | None:
    """One polyline per series name -> (xs, ys); non-positive points are dropped.

    Returns None when no series has a plottable point.
    """
    clean = {}
    for name in sorted(series):
        xs, ys = series[name]
        pts = [(math.log10(x), math.log10(y)) for x, y in zip(xs, ys)
               if x > 0 and y > 0 and math.isfinite(x) and math.isfinite(y)]
        if pts:
            clean[name] = pts
    if not clean:
        return None
    all_x = [p[0] for pts in clean.values() for p in pts]
    all_y = [p[1] for pts in clean.values() for p in pts]
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = min(all_y), max(all_y)
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in _decades(x0, x1):
        if x0 <= d <= x1:
            X = sx(d)
            out.append(f'<line x1="{X:.1f}" y1="{MARGIN["top"]}" x2="{X:.1f}" y2="{MARGIN["top"] + ph}" stroke="#ddd"/>')
            out.append(f'<text x="{X:.1f}" y="{MARGIN["top"] + ph + 16}" text-anchor="middle">1e{d}</text>')
    for d in _decades(y0, y1):
        if y0 <= d <= y1:
            Y = sy(d)
            out.append(f'<line x1="{MARGIN["left"]}" y1="{Y:.1f}" x2="{MARGIN["left"] + pw}" y2="{Y:.1f}" stroke="#ddd"/>')
            out.append(f'<text x="{MARGIN["left"] - 6}" y="{Y + 4:.1f}" text-anchor="end">1e{d}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text transform="translate(16 {MARGIN["top"] + ph / 2:.1f}) rotate(-90)" text-anchor="middle">{escape(ylabel)}</text>'
    )
    for k, (name, pts) in enumerate(clean.items()):
        color = PALETTE[k % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        if len(pts) == 1:
            x, y = pts[0]
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        else:
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN["top"] + 12 + 14 * k
        lx = WIDTH - MARGIN["right"] + 10
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 16}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 20}" y="{ly}">{escape(name[:24])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
