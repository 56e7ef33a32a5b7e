"""Minimal self-contained SVG line plots, no rendering dependencies."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .exceptions import ValidationError

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=20, top=40, bottom=50)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / count
    mag = 10.0 ** np.floor(np.log10(raw))
    step = mag * min((1, 2, 5, 10), key=lambda m: abs(m * mag - raw))
    return np.arange(np.ceil(lo / step) * step, hi + 0.5 * step, step)


def render_svg(series, title: str = "", xlabel: str = "", ylabel: str = "", steps: bool = False) -> str:
    """SVG text for a list of ``(label, x, y)`` series, one polyline each.

    With ``steps=True`` each series is drawn as a right-continuous step
    function, which suits ECDFs.
    """
    series = [(str(lab), np.asarray(x, float), np.asarray(y, float)) for lab, x, y in series]
    if not series or any(x.size == 0 or x.size != y.size for _, x, y in series):
        raise ValidationError("need at least one nonempty series with matching x and y")
    xs = np.concatenate([x for _, x, _ in series])
    ys = np.concatenate([y for _, _, y in series])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValidationError("series contain non-finite values")
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - left - MARGIN["right"]
    ph = HEIGHT - top - MARGIN["bottom"]

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 18}" text-anchor="middle">{t:.4g}</text>')
    for t in _nice_ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{top - 15}" text-anchor="middle" font-size="14">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="15" y="{top + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 15 {top + ph / 2})">{escape(ylabel)}</text>')
    for i, (lab, x, y) in enumerate(series):
        if steps:
            x = np.repeat(x, 2)[1:]
            y = np.repeat(y, 2)[:-1]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}">'
                   f"<title>{escape(lab)}</title></polyline>")
        ly = top + 15 + 15 * i
        out.append(f'<line x1="{left + pw - 110}" y1="{ly - 4}" x2="{left + pw - 90}" y2="{ly - 4}" stroke="{color}"/>')
        out.append(f'<text x="{left + pw - 85}" y="{ly}">{escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(series, path, **kwargs):
    """Write :func:`render_svg` output to ``path``."""
    text = render_svg(series, **kwargs)
    with open(path, "w") as fh:
        fh.write(text)


__all__ = ["render_svg", "emit_svg"]
