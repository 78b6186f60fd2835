"""Deterministic SVG drawings of walls in the upper (t, u) half-plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .wallmap import WallCurve, sample_component

PALETTE = ("#d62728", "#1f77b4", "#9467bd", "#8c564b", "#2ca02c", "#ff7f0e")


@dataclass(frozen=True)
class Viewport:
    t_min: float = -3.0
    t_max: float = 1.0
    u_max: float = 1.5
    width: int = 640
    height: int = 360
    margin: int = 24

    def x(self, t: float) -> float:
        span = self.width - 2 * self.margin
        return self.margin + (t - self.t_min) / (self.t_max - self.t_min) * span

    def y(self, u: float) -> float:
        span = self.height - 2 * self.margin
        return self.height - self.margin - u / self.u_max * span

    def header(self) -> str:
        return (
            f"viewport t=[{_num(self.t_min)},{_num(self.t_max)}] u=[0,{_num(self.u_max)}] "
            f"-> x=[{self.margin},{self.width - self.margin}] y=[{self.height - self.margin},{self.margin}] px"
        )


@dataclass(frozen=True)
class Annotation:
    t: float
    u: float
    label: str


def _num(x: float) -> str:
    s = f"{x:.6g}"
    return "0" if s == "-0" else s


def _pt(vp: Viewport, t: float, u: float) -> str:
    return f"{_num(vp.x(t))},{_num(vp.y(u))}"


def _polyline_paths(vp: Viewport, pts: list[tuple[float, float]]) -> list[str]:
    """Split a sample run where it leaves the viewport."""
    paths, cur = [], []
    for t, u in pts:
        if u > vp.u_max * 1.02 or not math.isfinite(u):
            if len(cur) > 1:
                paths.append(cur)
            cur = []
            continue
        cur.append((t, u))
    if len(cur) > 1:
        paths.append(cur)
    return ["M" + " L".join(_pt(vp, t, u) for t, u in run) for run in paths]


def _type2_arc(vp: Viewport, w: WallCurve) -> str | None:
    r2 = w.radius_sq
    if r2 is None or r2 <= 0:
        return None
    c, r = float(w.center_t), math.sqrt(float(r2))
    rx = r / (vp.t_max - vp.t_min) * (vp.width - 2 * vp.margin)
    ry = r / vp.u_max * (vp.height - 2 * vp.margin)
    return f"M{_pt(vp, c - r, 0)} A{_num(rx)},{_num(ry)} 0 0 1 {_pt(vp, c + r, 0)}"


def quiver_region_path(vp: Viewport, samples: int = 512) -> list[str]:
    """Outline of the region below both hyperbolas, one closed path per unit cell."""
    out = []
    for k in range(math.floor(vp.t_min), math.ceil(vp.t_max)):
        lo, hi = max(float(k), vp.t_min), min(float(k + 1), vp.t_max)
        if hi <= lo:
            continue
        pts = []
        for i in range(samples):
            t = lo + (hi - lo) * i / (samples - 1)
            tp = t - (k + 1)  # t - ceil(t) on the open cell
            h = min((tp + 2) ** 2 - 1, (tp - 1) ** 2 - 1) / 2
            pts.append((t, math.sqrt(h) if h > 0 else 0.0))
        body = " L".join(_pt(vp, t, min(u, vp.u_max)) for t, u in pts)
        out.append(f"M{_pt(vp, lo, 0)} L{body} L{_pt(vp, hi, 0)} Z")
    return out


def emit_svg(
    curves: Sequence[WallCurve],
    *,
    region: bool = False,
    annotations: Sequence[Annotation] = (),
    viewport: Viewport | None = None,
    labels: Sequence[str] | None = None,
    samples: int = 512,
) -> str:
    vp = viewport or Viewport()
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- {vp.header()} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{vp.width}" height="{vp.height}" '
        f'viewBox="0 0 {vp.width} {vp.height}">',
        f'<rect x="0" y="0" width="{vp.width}" height="{vp.height}" fill="white"/>',
    ]
    if region:
        for d in quiver_region_path(vp, samples):
            lines.append(f'<path class="quiver-region" d="{d}" fill="#2ca02c" fill-opacity="0.15" '
                         'stroke="#2ca02c" stroke-dasharray="4 3"/>')
    # axes
    y0 = _num(vp.y(0))
    lines.append(f'<line class="axis" x1="{vp.margin}" y1="{y0}" x2="{vp.width - vp.margin}" y2="{y0}" stroke="black"/>')
    if vp.t_min <= 0 <= vp.t_max:
        x0 = _num(vp.x(0))
        lines.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{vp.margin}" stroke="black"/>')
    for i, w in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        name = labels[i] if labels and i < len(labels) else f"wall{i}"
        lines.append(f'<g class="wall" id="{name}" data-kind="{w.kind}" stroke="{color}" fill="none">')
        arc = _type2_arc(vp, w) if w.kind == "Type2" else None
        if arc is not None:
            lines.append(f'<path d="{arc}"/>')
        else:
            for comp in w.components:
                for d in _polyline_paths(vp, sample_component(w, comp, vp.t_min, vp.t_max, samples)):
                    lines.append(f'<path d="{d}"/>')
        if w.asymptote_t is not None and vp.t_min <= w.asymptote_t <= vp.t_max:
            xa = _num(vp.x(float(w.asymptote_t)))
            lines.append(f'<line class="asymptote" x1="{xa}" y1="{y0}" x2="{xa}" y2="{vp.margin}" stroke-dasharray="2 2"/>')
        if w.center_t is not None and vp.t_min <= w.center_t <= vp.t_max:
            lines.append(f'<circle class="center" cx="{_num(vp.x(float(w.center_t)))}" cy="{y0}" r="2.5" fill="{color}"/>')
        lines.append(f'<text x="{_num(vp.width - vp.margin - 60)}" y="{vp.margin + 14 * (i + 1)}" '
                     f'fill="{color}" font-size="11">{name}</text>')
        lines.append("</g>")
    for a in annotations:
        lines.append(f'<circle class="annotation" cx="{_num(vp.x(a.t))}" cy="{_num(vp.y(a.u))}" r="2.5" fill="black"/>')
        lines.append(f'<text x="{_num(vp.x(a.t) + 4)}" y="{_num(vp.y(a.u) - 4)}" font-size="11">{a.label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
