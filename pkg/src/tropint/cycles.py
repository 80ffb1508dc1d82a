"""Tropical cycles: balanced weighted polyhedral complexes up to refinement.

A cycle is a pure-dimensional complex with integer weights on the
maximal cells; the balancing condition is verified at construction by
default.  Equality, addition and weight transport all work modulo
common refinement, so a cycle object is one representative of its
equivalence class.
"""

from __future__ import annotations

from typing import Sequence

from .complexes import Fan, PolyhedralComplex, overlay_pieces
from .lattice import primitive_normal_vector
from .polyhedron import Polyhedron
from .vec import is_zero, vadd, vscale, vsub, zero


class UnbalancedCycleError(ValueError):
    def __init__(self, failures):
        self.failures = failures
        cells = ", ".join(repr(tau) for tau, _ in failures[:3])
        super().__init__(f"balancing fails at {len(failures)} cell(s): {cells}")


_NORMAL_CACHE: dict = {}


def normal_vector(sigma: Polyhedron, tau: Polyhedron) -> tuple[int, ...]:
    """Primitive lattice normal vector of sigma relative to its facet tau."""
    cached = _NORMAL_CACHE.get((sigma.key, tau.key))
    if cached is None:
        toward = vsub(sigma.relative_interior_point(), tau.relative_interior_point())
        cached = primitive_normal_vector(sigma.linear_space(), tau.linear_space(), toward)
        _NORMAL_CACHE[(sigma.key, tau.key)] = cached
    return cached


class TropicalCycle:
    """Weighted pure-dimensional complex satisfying the balancing condition."""

    def __init__(
        self,
        complex_: PolyhedralComplex,
        weights: dict,
        dimension: int | None = None,
        validate: bool = True,
    ):
        self.complex = complex_
        self.ambient_rank = complex_.ambient_rank
        if complex_.cells:
            dims = {complex_.cells[k].dim() for k in complex_.maximal_keys}
            if len(dims) != 1:
                raise ValueError("cycle complex must be pure dimensional")
            self.dimension = dims.pop()
            if dimension is not None and dimension != self.dimension:
                raise ValueError("stated dimension disagrees with the complex")
        else:
            self.dimension = dimension if dimension is not None else 0
        self.weights = {
            k: int(weights.get(k, 0)) for k in complex_.maximal_keys
        }
        if validate:
            ok, failures = self.is_balanced()
            if not ok:
                raise UnbalancedCycleError(failures)

    @classmethod
    def unchecked(cls, complex_, weights, dimension=None) -> "TropicalCycle":
        return cls(complex_, weights, dimension, validate=False)

    @classmethod
    def zero(cls, ambient_rank: int, dimension: int) -> "TropicalCycle":
        return cls(PolyhedralComplex.empty(ambient_rank), {}, dimension)

    @classmethod
    def from_weighted_cells(
        cls, cells: Sequence[tuple[Polyhedron, int]], validate: bool = True
    ) -> "TropicalCycle":
        complex_ = PolyhedralComplex.from_maximal_cells([c for c, _ in cells])
        weights = {c.key: w for c, w in cells}
        return cls(complex_, weights, validate=validate)

    # -- basics ------------------------------------------------------------

    @property
    def codimension(self) -> int:
        return self.ambient_rank - self.dimension

    def weight_of(self, cell: Polyhedron) -> int:
        return self.weights.get(cell.key, 0)

    def weighted_cells(self) -> list[tuple[Polyhedron, int]]:
        return [(self.complex.cells[k], self.weights[k]) for k in self.complex.maximal_keys]

    def nonzero_cells(self) -> list[tuple[Polyhedron, int]]:
        return [(c, w) for c, w in self.weighted_cells() if w != 0]

    def is_zero(self) -> bool:
        return not self.nonzero_cells()

    def total_weight(self) -> int:
        return sum(w for _, w in self.weighted_cells())

    def __repr__(self) -> str:
        return (
            f"TropicalCycle(dim {self.dimension} in R^{self.ambient_rank}, "
            f"{len(self.weights)} cells)"
        )

    # -- balancing -----------------------------------------------------------

    def is_balanced(self):
        """Check the balancing condition; returns (ok, failing cells).

        At each codimension-one cell the weighted sum of primitive normal
        vectors must lie in the cell's direction lattice; integrality is
        automatic, so membership reduces to a rational span test.
        """
        if not self.complex.cells:
            return True, []
        n = self.dimension
        failures = []
        for tau in self.complex.cells_of_dim(n - 1):
            total = zero(self.ambient_rank)
            for sigma in self.complex.facet_cofaces(tau, n):
                w = self.weights.get(sigma.key, 0)
                if w == 0:
                    continue
                total = vadd(total, vscale(w, normal_vector(sigma, tau)))
            if not is_zero(total) and not tau.linear_space().spans_rationally(total):
                failures.append((tau, total))
        return not failures, failures

    # -- group structure -------------------------------------------------------

    def scale(self, k: int) -> "TropicalCycle":
        return TropicalCycle(
            self.complex,
            {key: k * w for key, w in self.weights.items()},
            self.dimension,
            validate=False,
        )

    def add(self, other: "TropicalCycle") -> "TropicalCycle":
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient rank mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        complex_, weights = overlay_pieces(
            self.nonzero_cells() + other.nonzero_cells(), self.ambient_rank
        )
        return TropicalCycle(complex_, weights, self.dimension, validate=False)

    def __add__(self, other):
        return self.add(other)

    def __mul__(self, k: int):
        return self.scale(k)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1)

    # -- supports and refinement ----------------------------------------------

    def support(self) -> PolyhedralComplex:
        cells = [c for c, w in self.nonzero_cells()]
        if not cells:
            return PolyhedralComplex.empty(self.ambient_rank)
        return PolyhedralComplex.from_maximal_cells(
            cells, validate=False, ambient_rank=self.ambient_rank
        )

    def induce_weights(self, refinement: PolyhedralComplex) -> "TropicalCycle":
        """Transport weights to a subdivision of the underlying complex."""
        if refinement.ambient_rank != self.ambient_rank:
            raise ValueError("ambient rank mismatch")
        new_weights = {}
        for key in refinement.maximal_keys:
            piece = refinement.cells[key]
            if piece.dim() != self.dimension:
                raise ValueError("refinement is not a subdivision: dimension drops")
            parent = self._covering_cell(piece)
            if parent is None:
                raise ValueError("refinement is not a subdivision: cell sticks out")
            new_weights[key] = self.weights[parent.key]
        self._check_support_covered(refinement)
        return TropicalCycle(refinement, new_weights, self.dimension, validate=False)

    def _covering_cell(self, piece: Polyhedron) -> Polyhedron | None:
        for k in self.complex.maximal_keys:
            if self.complex.cells[k].contains(piece):
                return self.complex.cells[k]
        return None

    def _check_support_covered(self, refinement: PolyhedralComplex):
        from .complexes import hyperplanes_of, split_by_hyperplanes

        hyps = {
            h
            for k in refinement.maximal_keys
            for h in hyperplanes_of(refinement.cells[k])
        }
        hyps = sorted(hyps)
        for k in self.complex.maximal_keys:
            cell = self.complex.cells[k]
            for piece in split_by_hyperplanes(cell, hyps):
                pt = piece.relative_interior_point()
                if not refinement.contains_point(pt):
                    raise ValueError("refinement is not a subdivision: support shrinks")

    # -- equality up to refinement -----------------------------------------------

    def equals(self, other: "TropicalCycle") -> bool:
        """Equality as tropical cycles (common subdivision, equal weights)."""
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient rank mismatch")
        mine = self.nonzero_cells()
        theirs = other.nonzero_cells()
        if not mine and not theirs:
            return True
        if not mine or not theirs or self.dimension != other.dimension:
            return False
        tagged = [(c, (w, 0)) for c, w in mine] + [(c, (0, w)) for c, w in theirs]
        _, weights = overlay_pieces(
            tagged,
            self.ambient_rank,
            combine=lambda a, b: (a[0] + b[0], a[1] + b[1]),
        )
        return all(w1 == w2 for w1, w2 in weights.values())

    # -- stars -------------------------------------------------------------------

    def star(self, tau: Polyhedron) -> "TropicalCycle":
        """Star fan cycle at a cell, with induced weights, in the quotient."""
        fan, proj, x0, images = self.complex.star_with_chart(tau)
        weights = {}
        for key in self.complex.maximal_keys:
            image = images.get(key)
            if image is not None:
                weights[image.key] = self.weights[key]
        return TropicalCycle(fan, weights)


def star_cycle(cycle: TropicalCycle, tau: Polyhedron) -> TropicalCycle:
    return cycle.star(tau)


class MinkowskiWeight:
    """Integer weights on the codimension-k cones of a complete fan."""

    def __init__(self, fan: Fan, codim: int, weights: dict, validate: bool = True):
        self.fan = fan
        self.codim = codim
        r = fan.ambient_rank
        cone_keys = [c.key for c in fan.cells_of_dim(r - codim)]
        self.weights = {k: int(weights.get(k, 0)) for k in cone_keys}
        if validate:
            if not fan.is_complete():
                raise ValueError("Minkowski weights require a complete fan")
            ok, failures = self.as_cycle().is_balanced()
            if not ok:
                raise UnbalancedCycleError(failures)

    def as_cycle(self) -> TropicalCycle:
        """The underlying tropical cycle on the codim-k skeleton."""
        skel = self.fan.skeleton(self.codim)
        if not skel.cells:
            return TropicalCycle.zero(self.fan.ambient_rank, self.fan.ambient_rank - self.codim)
        return TropicalCycle.unchecked(
            skel, dict(self.weights), self.fan.ambient_rank - self.codim
        )

    def weight_of(self, cone: Polyhedron) -> int:
        return self.weights.get(cone.key, 0)

    def __repr__(self) -> str:
        return f"MinkowskiWeight(codim {self.codim} on {self.fan!r})"
