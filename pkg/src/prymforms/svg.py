"""Flat pictures of cylinder diagrams.

Coordinates are exact field elements until the last moment; the SVG carries
decimal approximations for display only.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .quadfield import QF
from .surface import CylSurface, natural_key

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)
GAP = Fraction(1, 4)


def _num(x) -> str:
    return f"{float(x):.12g}"


def sc_colors(X: CylSurface) -> dict[str, str]:
    """One color per involution orbit of saddle connections (per connection without one)."""
    ids = sorted(X.sc, key=natural_key)
    orbit: dict[str, str] = {}
    for a in ids:
        if a in orbit:
            continue
        mate = X.inv.s.get(a, a) if X.inv is not None else a
        color = PALETTE[len(set(orbit.values())) % len(PALETTE)]
        orbit[a] = orbit[mate] = color
    return orbit


def _layout(X: CylSurface):
    """Bottom-left corner height of every cylinder, stacked in id order."""
    y = X.q(0)
    out = []
    for c in sorted(X.cyls, key=lambda c: natural_key(c.id)):
        out.append((c, y))
        y = y + c.height + GAP
    return out, y - GAP


def render_svg(X: CylSurface, scale=100) -> str:
    scale = Fraction(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    colors = sc_colors(X)
    placed, total_h = _layout(X)
    min_x = min([X.q(0)] + [c.twist for c, _ in placed])
    max_x = max(max(c.width, c.twist + c.width) for c, _ in placed)
    pad = Fraction(1, 5)
    width = (max_x - min_x + 2 * pad) * scale
    height = (total_h + 2 * pad) * scale

    def px(x: QF) -> str:
        return _num((x - min_x + pad) * scale)

    def py(y: QF) -> str:
        return _num((total_h - y + pad) * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">',
        f"<title>{escape(X.tag or 'cylinder diagram')} (D={X.disc})</title>",
    ]
    for c, y0 in placed:
        y1 = y0 + c.height
        corners = [(X.q(0), y0), (c.width, y0), (c.twist + c.width, y1), (c.twist, y1)]
        pts = " ".join(f"{px(x)},{py(y)}" for x, y in corners)
        lines.append(f'<g class="cylinder" id="{escape(c.id)}">')
        lines.append(f'<polygon points="{pts}" fill="#f4f4f4" stroke="none"/>')
        lines += _boundary(X, c.bottom, X.q(0), y0, colors, px, py, "bottom")
        lines += _boundary(X, c.top, c.twist, y1, colors, px, py, "top")
        lines.append(
            f'<line x1="{px(X.q(0))}" y1="{py(y0)}" x2="{px(c.twist)}" y2="{py(y1)}" '
            f'stroke="#999" stroke-dasharray="4 3"/>'
        )
        lines.append(
            f'<line x1="{px(c.width)}" y1="{py(y0)}" x2="{px(c.twist + c.width)}" y2="{py(y1)}" '
            f'stroke="#999" stroke-dasharray="4 3"/>'
        )
        cx, cy = (c.twist + 2 * c.width) / 3, y0 + c.height / 2
        lines.append(f'<text x="{px(cx)}" y="{py(cy)}" font-size="12" fill="#444">{escape(c.id)}</text>')
        lines.append("</g>")
    for c, y0 in placed:
        for z_x, z_y, zid in _zero_marks(X, c, y0):
            lines.append(f'<circle cx="{px(z_x)}" cy="{py(z_y)}" r="3" fill="#000"><title>{escape(zid)}</title></circle>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _boundary(X, word, x0, y, colors, px, py, side):
    out, x = [], x0
    for a in word:
        end = x + X.sc[a].length
        out.append(
            f'<line class="sc {side}" data-sc="{escape(a)}" x1="{px(x)}" y1="{py(y)}" '
            f'x2="{px(end)}" y2="{py(y)}" stroke="{colors[a]}" stroke-width="2"/>'
        )
        mid = (x + end) / 2
        dy = Fraction(-1, 12) if side == "bottom" else Fraction(1, 20)
        out.append(
            f'<text x="{px(mid)}" y="{py(y - dy)}" font-size="10" fill="{colors[a]}" '
            f'text-anchor="middle">{escape(a)}</text>'
        )
        x = end
    return out


def _zero_marks(X, c, y0):
    x = X.q(0)
    for a in c.bottom:
        yield x, y0, X.sc[a].from_zero
        x = x + X.sc[a].length
