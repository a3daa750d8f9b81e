"""SVG rendering of aligned preshapes and their mean."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .extrinsic import extrinsic_mean
from .intrinsic import karcher_mean
from .shape_core import Shape, align_rotation

SIZE = 400.0
SCALE = 180.0  # pixels per preshape unit; preshape coordinates lie in [-1, 1]
CIRCLE_RADIUS = 2.0
STAR_RADIUS = 6.0


def to_pixels(z: complex) -> tuple[float, float]:
    return SIZE / 2 + SCALE * z.real, SIZE / 2 - SCALE * z.imag


def from_pixels(x: float, y: float) -> complex:
    return complex((x - SIZE / 2) / SCALE, (SIZE / 2 - y) / SCALE)


def _star(cx: float, cy: float, r: float) -> str:
    pts = []
    for i in range(10):
        rad = r if i % 2 == 0 else 0.4 * r
        ang = -math.pi / 2 + i * math.pi / 5
        pts.append(f"{cx + rad * math.cos(ang):.3f},{cy + rad * math.sin(ang):.3f}")
    return " ".join(pts)


def sample_mean(shapes: Sequence[Shape], method: str) -> Shape:
    if method == "intrinsic":
        return karcher_mean(shapes).mean
    return extrinsic_mean(shapes)[0]


def render_svg(shapes: Sequence[Shape], mean: Shape, title: str = "") -> str:
    """Each preshape rotated onto ``mean`` as small circles, the mean as stars."""
    m = mean.rep
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:g}" height="{SIZE:g}" '
        f'viewBox="0 0 {SIZE:g} {SIZE:g}">',
    ]
    if title:
        lines.append(f"<title>{escape(title)}</title>")
    lines.append(f'<rect x="0" y="0" width="{SIZE:g}" height="{SIZE:g}" fill="white"/>')
    lines.append('<g class="objects" fill="none" stroke="#4477aa" stroke-width="0.8">')
    for s in shapes:
        aligned = align_rotation(s.rep, m).u
        for z in aligned:
            x, y = to_pixels(z)
            lines.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="{CIRCLE_RADIUS:g}"/>')
    lines.append("</g>")
    lines.append('<g class="mean" fill="#cc3311" stroke="none">')
    for z in m.u:
        x, y = to_pixels(z)
        lines.append(f'<polygon points="{_star(x, y, STAR_RADIUS)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def plot_shapes(shapes: Sequence[Shape], mean_method: str, out_path, title: str = "") -> Path:
    mean = sample_mean(shapes, mean_method)
    out = Path(out_path)
    out.write_text(render_svg(shapes, mean, title), encoding="utf-8")
    return out
