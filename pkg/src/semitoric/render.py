"""Deterministic SVG drawings of fans and polygons, one panel per object."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .polygeom import PrimitiveSemitoricPolygon, RationalPolygon
from .semitoricfan import D, F, SemitoricFan
from .toricfan import ToricFan

PANEL = 240
MARGIN = 20
LABEL_COLOURS = {D: "#555555", F: "#d9822b", "hidden": "#c23030"}


def _num(x) -> str:
    s = f"{float(x):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Panel:
    """Maps a bounding box into a square panel with y pointing up."""

    def __init__(self, index: int, xs: Sequence, ys: Sequence):
        lo_x, hi_x = min(xs), max(xs)
        lo_y, hi_y = min(ys), max(ys)
        span = max(hi_x - lo_x, hi_y - lo_y, 1)
        self.scale = Fraction(PANEL - 2 * MARGIN) / Fraction(span)
        self.ox = index * PANEL + MARGIN - lo_x * self.scale + (span - (hi_x - lo_x)) * self.scale / 2
        self.oy = PANEL - MARGIN + lo_y * self.scale - (span - (hi_y - lo_y)) * self.scale / 2

    def pt(self, p) -> tuple[str, str]:
        return _num(self.ox + Fraction(p[0]) * self.scale), _num(self.oy - Fraction(p[1]) * self.scale)


def _fan_panel(i: int, fan: SemitoricFan | ToricFan) -> list[str]:
    vectors = fan.vectors
    labels = getattr(fan, "labels", (D,) * len(vectors))
    r = max(max(abs(c) for c in v) for v in vectors)
    panel = _Panel(i, [-r, r], [-r, r])
    ox, oy = panel.pt((0, 0))
    out = ['<g class="fan">']
    for k, v in enumerate(vectors):
        x, y = panel.pt(v)
        out.append(f'<line x1="{ox}" y1="{oy}" x2="{x}" y2="{y}" stroke="#222222" stroke-width="1.5"/>')
        out.append(f'<text x="{x}" y="{y}" font-size="10">{v[0]},{v[1]}</text>')
        lab = labels[k]
        if lab is not D:
            w = vectors[(k + 1) % len(vectors)]
            mx, my = panel.pt(((v[0] + w[0]) / 2, (v[1] + w[1]) / 2))
            colour = LABEL_COLOURS[F] if lab is F else LABEL_COLOURS["hidden"]
            out.append(f'<text x="{mx}" y="{my}" font-size="10" fill="{colour}">{lab.short}</text>')
    out.append(f'<circle cx="{ox}" cy="{oy}" r="2" fill="#222222"/>')
    out.append("</g>")
    return out


def _polygon_panel(i: int, p: PrimitiveSemitoricPolygon) -> list[str]:
    vs = p.polygon.vertices
    panel = _Panel(i, [v[0] for v in vs], [v[1] for v in vs])
    points = " ".join(",".join(panel.pt(v)) for v in vs)
    out = ['<g class="polygon">',
           f'<polygon points="{points}" fill="#dde7f2" stroke="#1f4e79" stroke-width="1.5"/>']
    for m in p.markers:
        lo, hi = p.polygon.vertical_extent(m.lam)
        x1, y1 = panel.pt((m.lam, lo))
        x2, y2 = panel.pt((m.lam, hi))
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#888888" stroke-dasharray="4 3"/>')
        out.append(f'<circle cx="{x2}" cy="{y2}" r="3" fill="{LABEL_COLOURS[F]}"/>')
        out.append(f'<text x="{x2}" y="{y2}" dy="-5" font-size="10">k={m.k}</text>')
    out.append("</g>")
    return out


def render_svg(objects: Iterable) -> str:
    """SVG text for a sequence of fans and polygons, laid out left to right."""
    objs = list(objects)
    body: list[str] = []
    for i, obj in enumerate(objs):
        if isinstance(obj, RationalPolygon):
            obj = PrimitiveSemitoricPolygon(obj, ())
        if isinstance(obj, PrimitiveSemitoricPolygon):
            body += _polygon_panel(i, obj)
        elif isinstance(obj, (SemitoricFan, ToricFan)):
            body += _fan_panel(i, obj)
        else:
            raise TypeError(f"cannot render {type(obj).__name__}")
    width = PANEL * max(len(objs), 1)
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" '
            f'viewBox="0 0 {width} {PANEL}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"
