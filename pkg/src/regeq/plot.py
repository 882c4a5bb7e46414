"""Minimal SVG scatter of a one-dimensional game with the players' lines."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

STYLE = {
    # tag -> (marker, colour)
    "both": ("star", "#2ca02c"),
    "all": ("star", "#2ca02c"),
    "only-1": ("circle", "#d62728"),
    "only-2": ("square", "#1f77b4"),
    "none": ("cross", "#000000"),
}
LINE_COLOURS = ["#d62728", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"]


def _style(tag: str):
    return STYLE.get(tag, ("diamond", "#7f7f7f"))


def _marker(kind, cx, cy, colour, tag, j):
    attrs = f'class="pt" data-index="{j}" data-tag={quoteattr(tag)}'
    r = 4.0
    if kind == "circle":
        return f'<circle {attrs} cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" fill="none" stroke="{colour}"/>'
    if kind == "square":
        return (f'<rect {attrs} x="{cx - r:.2f}" y="{cy - r:.2f}" width="{2 * r}" '
                f'height="{2 * r}" fill="none" stroke="{colour}"/>')
    if kind == "cross":
        d = f"M{cx - r:.2f},{cy - r:.2f}L{cx + r:.2f},{cy + r:.2f}M{cx - r:.2f},{cy + r:.2f}L{cx + r:.2f},{cy - r:.2f}"
        return f'<path {attrs} d="{d}" stroke="{colour}"/>'
    if kind == "star":
        ang = np.pi / 2 + np.arange(10) * np.pi / 5
        rad = np.where(np.arange(10) % 2 == 0, r * 1.3, r * 0.55)
        pts = " ".join(f"{cx + a:.2f},{cy - b:.2f}" for a, b in zip(rad * np.cos(ang), rad * np.sin(ang)))
        return f'<polygon {attrs} points="{pts}" fill="{colour}"/>'
    return (f'<polygon {attrs} points="{cx:.2f},{cy - r:.2f} {cx + r:.2f},{cy:.2f} '
            f'{cx:.2f},{cy + r:.2f} {cx - r:.2f},{cy:.2f}" fill="{colour}"/>')


def scatter_svg(x, y, tags, lines, width: int = 480, height: int = 360, title: str = "") -> str:
    """``lines`` are ``(slope, intercept)`` pairs drawn across the x range."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    pad = 30
    x0, x1 = float(x.min()), float(x.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    y0, y1 = float(y.min()), float(y.max())
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    my = 0.08 * (y1 - y0)
    y0, y1 = y0 - my, y1 + my

    def sx(v):
        return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<clipPath id="plot"><rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
           f'height="{height - 2 * pad}"/></clipPath>',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           f'fill="none" stroke="#999"/>']
    if title:
        out.append(f'<text x="{width / 2}" y="{pad - 10}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{title}</text>')
    for k, (a, b) in enumerate(lines):
        dash = ' stroke-dasharray="6,4"' if k == 0 else ""
        out.append(f'<line class="strategy" data-player="{k + 1}" x1="{sx(x0):.2f}" '
                   f'y1="{sy(a * x0 + b):.2f}" x2="{sx(x1):.2f}" y2="{sy(a * x1 + b):.2f}" '
                   f'stroke="{LINE_COLOURS[k % len(LINE_COLOURS)]}" stroke-width="1.5"'
                   f'{dash} clip-path="url(#plot)"/>')
    for j, (xv, yv, tag) in enumerate(zip(x, y, tags)):
        kind, colour = _style(tag)
        out.append(_marker(kind, sx(xv), sy(yv), colour, tag, j))
    out.append("</svg>")
    return "\n".join(out) + "\n"
