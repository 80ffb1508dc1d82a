"""Deterministic SVG rendering of rank-2 cycles.

Segments, clipped rays and lines, dotted vertices, weight labels for
weights other than 1.  All geometry is computed in exact rationals and
formatted through a fixed-point decimal writer, so identical cycles
produce byte-identical files.
"""

from __future__ import annotations

from fractions import Fraction

from .cycles import TropicalCycle
from .polyhedron import Polyhedron
from .vec import vadd, vdot, vscale

F = Fraction

CANVAS = 420
PAD = 30


def _dec(x: Fraction) -> str:
    """Fixed-point decimal with two places, exact round-half-even."""
    scaled = round(Fraction(x) * 100)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 100)
    return f"{sign}{whole}.{frac:02d}"


def render_cycle_svg(cycle: TropicalCycle) -> str:
    if cycle.ambient_rank != 2:
        raise ValueError("plot supports rank 2 only")

    cells = [c for c, w in cycle.nonzero_cells()]
    weights = {c.key: w for c, w in cycle.nonzero_cells()}

    xs = [v[0] for c in cells for v in c.vertices] or [F(0)]
    ys = [v[1] for c in cells for v in c.vertices] or [F(0)]
    margin = max(max(xs) - min(xs), max(ys) - min(ys), F(1)) / 2 + 1
    lo_x, hi_x = min(xs) - margin, max(xs) + margin
    lo_y, hi_y = min(ys) - margin, max(ys) + margin
    span = max(hi_x - lo_x, hi_y - lo_y)
    scale = Fraction(CANVAS - 2 * PAD) / span

    def pix(pt) -> str:
        px = PAD + (Fraction(pt[0]) - lo_x) * scale
        py = PAD + (hi_y - Fraction(pt[1])) * scale
        return f"{_dec(px)},{_dec(py)}"

    box = Polyhedron.from_constraints(
        [
            ((1, 0), lo_x),
            ((-1, 0), -hi_x),
            ((0, 1), lo_y),
            ((0, -1), -hi_y),
        ],
        [],
        2,
    )

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">',
        '<style>line{stroke:#222;stroke-width:1.5} .axis{stroke:#bbb;stroke-width:0.75} '
        "circle{fill:#222} text{font:12px sans-serif;fill:#a00} "
        "polygon{fill:#dde6f0;stroke:none}</style>",
    ]

    # axes
    if lo_y <= 0 <= hi_y:
        a, b = (lo_x, 0), (hi_x, 0)
        out.append(
            f'<line class="axis" x1="{_pt_x(pix(a))}" y1="{_pt_y(pix(a))}" x2="{_pt_x(pix(b))}" y2="{_pt_y(pix(b))}"/>'
        )
    if lo_x <= 0 <= hi_x:
        a, b = (0, lo_y), (0, hi_y)
        out.append(
            f'<line class="axis" x1="{_pt_x(pix(a))}" y1="{_pt_y(pix(a))}" x2="{_pt_x(pix(b))}" y2="{_pt_y(pix(b))}"/>'
        )

    # two-dimensional cells as shaded clipped polygons
    for c in cells:
        if c.dim() != 2:
            continue
        clipped = c.intersect(box)
        if clipped is None:
            continue
        corners = _order_polygon(list(clipped.vertices))
        pts = " ".join(pix(v) for v in corners)
        out.append(f'<polygon points="{pts}"/>')

    # one-dimensional cells as segments / clipped rays / clipped lines
    for c in cells:
        if c.dim() != 1:
            continue
        seg = _clip_segment(c, box)
        if seg is None:
            continue
        a, b = seg
        out.append(
            f'<line x1="{_pt_x(pix(a))}" y1="{_pt_y(pix(a))}" x2="{_pt_x(pix(b))}" y2="{_pt_y(pix(b))}"/>'
        )

    # vertices of the support
    dots = sorted({v for c in cells for v in c.vertices})
    for v in dots:
        out.append(f'<circle cx="{_pt_x(pix(v))}" cy="{_pt_y(pix(v))}" r="3"/>')

    # weight labels for weights != 1
    for c in cells:
        w = weights[c.key]
        if w == 1:
            continue
        anchor = _label_anchor(c, box)
        out.append(
            f'<text x="{_pt_x(pix(anchor))}" y="{_pt_y(pix(anchor))}">{w}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pt_x(pix_str: str) -> str:
    return pix_str.split(",")[0]


def _pt_y(pix_str: str) -> str:
    return pix_str.split(",")[1]


def _clip_segment(cell: Polyhedron, box: Polyhedron):
    clipped = cell.intersect(box)
    if clipped is None or clipped.dim() != 1:
        return None
    verts = list(clipped.vertices)
    if len(verts) == 2:
        return verts[0], verts[1]
    if len(verts) == 1 and clipped.rays:
        # unbounded inside the box cannot happen; defensive fallback
        v = verts[0]
        return v, vadd(v, clipped.rays[0])
    return None


def _order_polygon(verts):
    n = len(verts)
    cx = sum(v[0] for v in verts) / n
    cy = sum(v[1] for v in verts) / n

    def half(v):
        dx, dy = v[0] - cx, v[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    ordered = [verts[0]]
    rest = verts[1:]

    # insertion order by exact cross products within half-planes
    def less(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha < hb
        cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        return cross > 0

    for v in rest:
        i = 0
        while i < len(ordered) and less(ordered[i], v):
            i += 1
        ordered.insert(i, v)
    return ordered


def _label_anchor(cell: Polyhedron, box: Polyhedron):
    clipped = cell.intersect(box)
    target = clipped if clipped is not None else cell
    pt = target.relative_interior_point()
    return vadd(pt, (F(1, 8), F(1, 8)))
