"""Polyhedral complexes and fans.

Complexes are built from maximal cells by face closure and validated
(pairwise intersections must be common faces).  The module also provides
the refinement machinery shared by the cycle calculus: overlays,
hyperplane arrangements, and star fans with an explicit integral chart
for the quotient lattice.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import IntegerMatrix, quotient_projection
from .polyhedron import Polyhedron, cone_from_rays, _normalize_hyperplane
from .vec import as_fractions, clear_denominators, is_zero, scaled_primitive, vdot, vsub


class NotAComplexError(ValueError):
    """Two cells intersect in a set that is not a common face."""

    def __init__(self, cell_a: Polyhedron, cell_b: Polyhedron):
        self.cell_a = cell_a
        self.cell_b = cell_b
        super().__init__(f"not a complex: {cell_a!r} and {cell_b!r} meet in a non-face")


class PolyhedralComplex:
    """Face-closed collection of polyhedra with a face-relation index."""

    def __init__(self, ambient_rank: int, cells: dict, maximal: tuple):
        self.ambient_rank = ambient_rank
        self.cells = cells  # key -> Polyhedron, face closed
        self.maximal_keys = maximal
        self._cofaces: dict | None = None
        self._star_cache: dict = {}
        self._key = None

    # -- construction ----------------------------------------------------

    @classmethod
    def empty(cls, ambient_rank: int) -> "PolyhedralComplex":
        return cls(ambient_rank, {}, ())

    @classmethod
    def from_maximal_cells(
        cls, cells: Sequence[Polyhedron], validate: bool = True, ambient_rank: int | None = None
    ) -> "PolyhedralComplex":
        cells = list(cells)
        if ambient_rank is None:
            if not cells:
                raise ValueError("ambient rank required for the empty complex")
            ambient_rank = cells[0].ambient_rank
        if any(c.ambient_rank != ambient_rank for c in cells):
            raise ValueError("ambient rank mismatch")

        closure: dict = {}
        for c in cells:
            for f in c.faces():
                closure.setdefault(f.key, f)

        maximal = _maximal_of(closure)
        if validate:
            mx = [closure[k] for k in maximal]
            for i, a in enumerate(mx):
                for b in mx[i + 1 :]:
                    meet = a.intersect(b)
                    if meet is None:
                        continue
                    if not (a.has_face(meet) and b.has_face(meet)):
                        raise NotAComplexError(a, b)
        return cls(ambient_rank, closure, maximal)

    # -- identity ----------------------------------------------------------

    @property
    def key(self):
        if self._key is None:
            self._key = (self.ambient_rank, tuple(sorted(self.cells)))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyhedralComplex) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self.cells)} cells in R^{self.ambient_rank})"

    # -- queries -----------------------------------------------------------

    def maximal_cells(self) -> list[Polyhedron]:
        return [self.cells[k] for k in self.maximal_keys]

    def cells_of_dim(self, d: int) -> list[Polyhedron]:
        return [c for k, c in sorted(self.cells.items()) if c.dim() == d]

    def is_pure(self, n: int) -> bool:
        return all(self.cells[k].dim() == n for k in self.maximal_keys)

    def dim(self) -> int:
        return max((c.dim() for c in self.cells.values()), default=-1)

    def contains_cell(self, p: Polyhedron) -> bool:
        return p.key in self.cells

    def contains_point(self, point) -> bool:
        return any(self.cells[k].contains_point(point) for k in self.maximal_keys)

    def cofaces(self, p: Polyhedron) -> list[Polyhedron]:
        """All cells having p as a face (p itself included)."""
        if self._cofaces is None:
            index: dict = {k: [] for k in self.cells}
            for k in sorted(self.cells):
                for fk in self.cells[k].face_keys():
                    if fk in index:
                        index[fk].append(k)
            self._cofaces = index
        return [self.cells[k] for k in self._cofaces[p.key]]

    def facet_cofaces(self, p: Polyhedron, dim: int) -> list[Polyhedron]:
        return [c for c in self.cofaces(p) if c.dim() == dim]

    # -- operations ----------------------------------------------------------

    def skeleton(self, l: int) -> "PolyhedralComplex":
        """Subcomplex of all cells of codimension >= l."""
        bound = self.ambient_rank - l
        kept = [c for c in self.cells.values() if c.dim() <= bound]
        if not kept:
            return PolyhedralComplex.empty(self.ambient_rank)
        return PolyhedralComplex.from_maximal_cells(
            kept, validate=False, ambient_rank=self.ambient_rank
        )

    def common_refinement(self, other: "PolyhedralComplex") -> "PolyhedralComplex":
        """Overlay: nonempty intersections of cells, supported on |self| & |other|."""
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient rank mismatch")
        pieces: dict = {}
        for a in self.maximal_cells():
            for b in other.maximal_cells():
                meet = a.intersect(b)
                if meet is not None:
                    pieces.setdefault(meet.key, meet)
        if not pieces:
            return PolyhedralComplex.empty(self.ambient_rank)
        return PolyhedralComplex.from_maximal_cells(
            list(pieces.values()), validate=False, ambient_rank=self.ambient_rank
        )

    def star(self, tau: Polyhedron) -> "Fan":
        fan, _, _, _ = self.star_with_chart(tau)
        return fan

    def star_with_chart(self, tau: Polyhedron):
        """Star fan at a cell plus the chart realizing the quotient lattice.

        Returns (fan, projection, base point, cell map) where projection is
        the integer matrix Z^r -> Z^q with kernel the saturated direction
        lattice of tau, and cell map sends keys of cells containing tau to
        their image cones.
        """
        if tau.key not in self.cells:
            raise ValueError("tau is not a cell of the complex")
        cached = self._star_cache.get(tau.key)
        if cached is not None:
            return cached
        proj = quotient_projection(tau.linear_space())
        x0 = tau.relative_interior_point()
        images: dict = {}
        for sigma in self.cofaces(tau):
            images[sigma.key] = project_tangent_cone(sigma, x0, proj)
        fan = Fan.from_maximal_cells(
            list(images.values()), validate=False, ambient_rank=proj.rows
        )
        result = (fan, proj, x0, images)
        self._star_cache[tau.key] = result
        return result

    def is_complete(self) -> bool:
        """Support covers the whole ambient space.

        Decided by the wall condition: pure top dimension with every
        codimension-one cell a face of exactly two maximal cells, applied
        recursively to star fans of positive-dimensional cells.
        """
        r = self.ambient_rank
        if r == 0:
            return bool(self.cells)
        if not self.cells or not self.is_pure(r):
            return False
        for wall in self.cells_of_dim(r - 1):
            if len(self.facet_cofaces(wall, r)) != 2:
                return False
        for tau in self.cells.values():
            if 1 <= tau.dim() <= r - 2:
                if not self.star(tau).is_complete():
                    return False
        return True


def _maximal_of(closure: dict) -> tuple:
    keys = sorted(closure)
    maximal = []
    for k in keys:
        c = closure[k]
        if not any(
            k != other and c.key in closure[other].face_keys() for other in keys
        ):
            maximal.append(k)
    return tuple(maximal)


def project_tangent_cone(sigma: Polyhedron, x0, proj: IntegerMatrix) -> Polyhedron:
    """Image of the tangent cone of sigma at x0 under the quotient chart."""
    dirs = []
    for v in sigma.vertices:
        d = proj.apply(clear_denominators(vsub(v, x0)))
        if not is_zero(d):
            dirs.append(scaled_primitive(d))
    for r in sigma.rays:
        d = proj.apply(r)
        if not is_zero(d):
            dirs.append(scaled_primitive(d))
    lin = []
    for l in sigma.lineality:
        d = proj.apply(l)
        if not is_zero(d):
            lin.append(d)
    return cone_from_rays(dirs, lineality=lin, ambient_rank=proj.rows)


class Fan(PolyhedralComplex):
    """Complex of strictly convex rational cones with common vertex 0."""

    @classmethod
    def from_maximal_cells(cls, cells, validate=True, ambient_rank=None):
        complex_ = PolyhedralComplex.from_maximal_cells(
            cells, validate=validate, ambient_rank=ambient_rank
        )
        for c in complex_.cells.values():
            if not c.is_strictly_convex():
                raise ValueError(f"fan cells must be strictly convex cones, got {c!r}")
        return cls(complex_.ambient_rank, complex_.cells, complex_.maximal_keys)


# ---------------------------------------------------------------------------
# arrangements and overlays

Hyperplane = tuple[tuple[int, ...], Fraction]


def hyperplanes_of(p: Polyhedron) -> list[Hyperplane]:
    return p.hyperplanes()


def split_by_hyperplanes(p: Polyhedron, hyperplanes: Iterable[Hyperplane]) -> list[Polyhedron]:
    """Pieces of p cut along the hyperplanes; pieces are arrangement cells."""
    pieces = [p]
    for a, b in hyperplanes:
        out = []
        for q in pieces:
            lo = hi = False
            for v in q.vertices:
                val = vdot(a, v)
                lo |= val < b
                hi |= val > b
            for r in list(q.rays) + list(q.lineality):
                val = vdot(a, r)
                lo |= val < 0
                hi |= val > 0
            for l in q.lineality:
                val = vdot(a, l)
                lo |= val > 0  # both directions of a lineality generator
                hi |= val < 0
            if not (lo and hi):
                out.append(q)
                continue
            upper = q.intersect(_halfspace(a, b, q.ambient_rank, True))
            lower = q.intersect(_halfspace(a, b, q.ambient_rank, False))
            for part in (upper, lower):
                if part is not None and part.dim() == q.dim():
                    out.append(part)
        pieces = out
    return pieces


_HALFSPACES: dict = {}


def _halfspace(a, b, rank, upper: bool) -> Polyhedron:
    key = (a, b, rank, upper)
    hs = _HALFSPACES.get(key)
    if hs is None:
        constraint = (a, b) if upper else (tuple(-x for x in a), -b)
        hs = Polyhedron.from_constraints([constraint], [], rank)
        _HALFSPACES[key] = hs
    return hs


def hyperplane_arrangement(
    hyperplanes: Sequence[Hyperplane], ambient_rank: int
) -> PolyhedralComplex:
    """Complete complex induced by a hyperplane arrangement."""
    dedup = sorted({_normalize_hyperplane(a, b) for a, b in hyperplanes})
    pieces = split_by_hyperplanes(Polyhedron.full_space(ambient_rank), dedup)
    return PolyhedralComplex.from_maximal_cells(
        pieces, validate=False, ambient_rank=ambient_rank
    )


def overlay_pieces(
    weighted_cells: Sequence[tuple[Polyhedron, object]],
    ambient_rank: int,
    extra_hyperplanes: Sequence[Hyperplane] = (),
    combine=lambda x, y: x + y,
):
    """Common-arrangement pieces of a family of equal-dimensional cells.

    Every input cell is split along the union of all constraint
    hyperplanes, so pieces coming from different cells coincide exactly;
    weights of coinciding pieces are combined.  Returns (complex, weights
    keyed by piece).
    """
    hyps = {h for p, _ in weighted_cells for h in hyperplanes_of(p)}
    hyps.update(_normalize_hyperplane(a, b) for a, b in extra_hyperplanes)
    hyps = sorted(hyps)
    pieces: dict = {}
    weights: dict = {}
    for p, w in weighted_cells:
        for piece in split_by_hyperplanes(p, hyps):
            if piece.key in weights:
                weights[piece.key] = combine(weights[piece.key], w)
            else:
                pieces[piece.key] = piece
                weights[piece.key] = w
    if not pieces:
        return PolyhedralComplex.empty(ambient_rank), {}
    complex_ = PolyhedralComplex.from_maximal_cells(
        list(pieces.values()), validate=False, ambient_rank=ambient_rank
    )
    return complex_, weights
