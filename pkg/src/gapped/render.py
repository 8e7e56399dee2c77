"""Text and SVG rendering of barcodes."""

from __future__ import annotations

import math

from .persistence import Barcode
from .scalars import SymbolicSlope, format_scalar

_ROW = 14
_LEFT = 60
_WIDTH = 400


def _position(x) -> float:
    # drawing coordinates only; all computation stays exact
    if isinstance(x, SymbolicSlope):
        return 2 * math.pi * float(x.two_pi) + float(x.const)
    return float(x)


def render_text(B: Barcode) -> str:
    return B.to_text()


def render_svg(B: Barcode) -> str:
    bars = B.expanded()
    ends = [_position(b.birth) for b in bars] + [_position(b.death) for b in bars if not b.infinite]
    lo = min(ends, default=0.0)
    hi = max(ends, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    scale = (_WIDTH - 40) / span

    def x(v: float) -> float:
        return round(_LEFT + (v - lo) * scale, 3)

    height = _ROW * (len(bars) + 2)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_LEFT + _WIDTH}" height="{height}" '
        f'viewBox="0 0 {_LEFT + _WIDTH} {height}">',
        '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="4" orient="auto">'
        '<path d="M0,0 L8,4 L0,8 z"/></marker></defs>',
    ]
    for k, b in enumerate(bars):
        y = _ROW * (k + 1)
        x1 = x(_position(b.birth))
        if b.infinite:
            out.append(f'<line x1="{x1}" y1="{y}" x2="{_LEFT + _WIDTH - 8}" y2="{y}" stroke="black" '
                       f'marker-end="url(#arrow)"/>')
        else:
            x2 = x(_position(b.death))
            if x2 == x1:
                out.append(f'<circle cx="{x1}" cy="{y}" r="2" fill="black"/>')
            else:
                out.append(f'<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="4" y="{y + 4}" font-size="10">{format_scalar(b.birth)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_barcode(B: Barcode, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(B)
    if fmt == "svg":
        return render_svg(B)
    raise ValueError(f"unknown format {fmt!r}")
