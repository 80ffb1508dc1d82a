"""Stable intersection, push-forward and pull-back of tropical cycles.

The three operations share one engine: localize at a candidate cell,
pass to star cones in the quotient lattice, certify a generic
displacement vector exactly, and read weights off the displacement rule
(lattice index of the sum of the two direction lattices, when the
displaced cones still meet).  Displacements happen entirely at the level
of star cones, so no "sufficiently small epsilon" ever needs a value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .complexes import (
    PolyhedralComplex,
    hyperplane_arrangement,
    overlay_pieces,
    project_tangent_cone,
)
from .cycles import MinkowskiWeight, TropicalCycle
from .lattice import (
    IntegerMatrix,
    Lattice,
    lattice_index,
    quotient_projection,
    rational_rank,
    right_inverse,
)
from .polyhedron import Polyhedron, feasible, _normalize_hyperplane
from .vec import as_fractions, is_zero, scaled_primitive, vadd, vdot, vsub


class GenericVectorError(RuntimeError):
    pass


class IntegralAffineMap:
    """Map x -> A x + t with integral linear part and rational translation."""

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix: IntegerMatrix, translation: Sequence | None = None):
        self.matrix = matrix
        if translation is None:
            translation = (0,) * matrix.rows
        self.translation = as_fractions(translation)
        if len(self.translation) != matrix.rows:
            raise ValueError("translation length must match the target rank")

    @classmethod
    def identity(cls, rank: int) -> "IntegralAffineMap":
        return cls(IntegerMatrix.identity(rank))

    @property
    def source_rank(self) -> int:
        return self.matrix.cols

    @property
    def target_rank(self) -> int:
        return self.matrix.rows

    def apply_point(self, p: Sequence) -> tuple[Fraction, ...]:
        return vadd(as_fractions(self.matrix.apply(p)), self.translation)

    def apply_vector(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def is_linear(self) -> bool:
        return all(t == 0 for t in self.translation)

    def key(self):
        return (self.matrix, self.translation)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegralAffineMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"IntegralAffineMap({self.source_rank} -> {self.target_rank})"


def compose(f: IntegralAffineMap, g: IntegralAffineMap) -> IntegralAffineMap:
    """The map x -> f(g(x))."""
    if f.source_rank != g.target_rank:
        raise ValueError("rank mismatch in composition")
    return IntegralAffineMap(
        f.matrix @ g.matrix, vadd(as_fractions(f.matrix.apply(g.translation)), f.translation)
    )


# ---------------------------------------------------------------------------
# generic displacement vectors


class DisplacementWitness:
    """A certified generic vector together with the pair data at that vector.

    ``pairs`` maps (key1, key2) of cone pairs to the displacement-rule
    coefficient: the lattice index of the sum of direction lattices when
    the displaced cones meet, and 0 when they miss.  Every recorded
    nonzero coefficient comes from an exactly verified transverse meet.
    """

    __slots__ = ("vector", "pairs")

    def __init__(self, vector: tuple, pairs: dict):
        self.vector = vector
        self.pairs = pairs

    @property
    def checked_pairs(self) -> list[tuple]:
        return [(k1, k2, c) for (k1, k2), c in sorted(self.pairs.items())]

    def coefficient(self, key1, key2) -> int:
        return self.pairs.get((key1, key2), 0)

    def meets(self, key1, key2) -> bool:
        return self.coefficient(key1, key2) != 0


_PRIME_CACHE = [2, 3, 5, 7, 11, 13]


def _primes(count: int) -> list[int]:
    n = _PRIME_CACHE[-1]
    while len(_PRIME_CACHE) < count:
        n += 2
        if all(n % p for p in _PRIME_CACHE if p * p <= n):
            _PRIME_CACHE.append(n)
    return _PRIME_CACHE[:count]


def candidate_vectors(rank: int, seq: int = 0):
    """Deterministic stream of displacement candidates: prime power tuples."""
    if rank == 0:
        yield ()
        return
    base = _primes((seq + 1) * rank)[seq * rank : (seq + 1) * rank]
    for t in range(1, 10_001):
        yield tuple(p**t for p in base)


_MEET_CACHE: dict = {}
_INDEX_CACHE: dict = {}
_WITNESS_CACHE: dict = {}


def _cones_meet(c1: Polyhedron, c2: Polyhedron, v: tuple) -> bool:
    """Exact test of c1 intersect (c2 + v) being nonempty."""
    key = (c1.key, c2.key, v)
    cached = _MEET_CACHE.get(key)
    if cached is None:
        fv = as_fractions(v)
        if c1.dim() == 0:
            cached = c2.contains_point(vsub(c1.vertices[0], fv))
        elif c2.dim() == 0:
            cached = c1.contains_point(vadd(c2.vertices[0], fv))
        else:
            ineqs = list(c1.inequalities) + [
                (a, b + vdot(a, fv)) for a, b in c2.inequalities
            ]
            eqs = list(c1.equations) + [(a, b + vdot(a, fv)) for a, b in c2.equations]
            cached = feasible(ineqs, eqs, c1.ambient_rank)
        _MEET_CACHE[key] = cached
    return cached


def _pair_index(c1: Polyhedron, c2: Polyhedron, rank: int) -> int:
    key = (c1.key, c2.key)
    cached = _INDEX_CACHE.get(key)
    if cached is None:
        vectors = c1.linear_space().vectors() + c2.linear_space().vectors()
        cached = lattice_index(Lattice.full(rank), vectors)
        _INDEX_CACHE[key] = cached
    return cached


def displacement_witness(
    cells1: Sequence[Polyhedron], cells2: Sequence[Polyhedron], rank: int, seq: int = 0
) -> DisplacementWitness:
    """Certified generic vector for two families of cones.

    Candidates from a fixed deterministic sequence are verified exactly:
    for every pair of faces, a nonempty displaced intersection must be
    transverse (direction spans adding up to the whole space).  The
    search is bounded to guard against a broken candidate stream.
    """
    all1 = _with_faces(cells1)
    all2 = _with_faces(cells2)
    cache_key = (
        tuple(c.key for c in all1),
        tuple(c.key for c in all2),
        rank,
        seq,
    )
    cached = _WITNESS_CACHE.get(cache_key)
    if cached is not None:
        return cached

    spans = {}
    for c in all1 + all2:
        if c.key not in spans:
            spans[c.key] = c.linear_space()
    transverse = {}
    for c1 in all1:
        for c2 in all2:
            pk = (c1.key, c2.key)
            if pk not in transverse:
                vecs = spans[c1.key].vectors() + spans[c2.key].vectors()
                transverse[pk] = rational_rank(vecs) == rank

    for v in candidate_vectors(rank, seq):
        pairs = {}
        ok = True
        for c1 in all1:
            for c2 in all2:
                pk = (c1.key, c2.key)
                if not _cones_meet(c1, c2, v):
                    pairs[pk] = 0
                    continue
                if not transverse[pk]:
                    ok = False
                    break
                pairs[pk] = _pair_index(c1, c2, rank)
            if not ok:
                break
        if ok:
            witness = DisplacementWitness(v, pairs)
            _WITNESS_CACHE[cache_key] = witness
            return witness
    raise GenericVectorError("no generic vector found")


def _with_faces(cells: Iterable[Polyhedron]) -> list[Polyhedron]:
    out = {}
    for c in cells:
        for f in c.faces():
            out.setdefault(f.key, f)
    return [out[k] for k in sorted(out)]


def generic_vector(fan1, fan2, seq: int = 0) -> DisplacementWitness:
    """Public entry point over two fans (or face-closed complexes)."""
    if fan1.ambient_rank != fan2.ambient_rank:
        raise ValueError("ambient rank mismatch")
    return displacement_witness(
        list(fan1.cells.values()), list(fan2.cells.values()), fan1.ambient_rank, seq
    )


# ---------------------------------------------------------------------------
# stable intersection


def _local_star_cones(cycle: TropicalCycle, x0, proj: IntegerMatrix):
    """Weighted tangent cones of the cycle at x0, in the quotient chart."""
    out = []
    for sigma, w in cycle.nonzero_cells():
        if sigma.contains_point(x0):
            out.append((project_tangent_cone(sigma, x0, proj), w))
    return out


def stable_intersect(
    c1: TropicalCycle, c2: TropicalCycle, seq: int = 0, trace: list | None = None
) -> TropicalCycle:
    """Stable intersection product via the local fan displacement rule.

    The candidate cells are the codim (k1+k2) cells of the overlay of the
    two supports; each weight is computed in the star cones at that cell
    with a freshly certified generic vector.
    """
    if c1.ambient_rank != c2.ambient_rank:
        raise ValueError("ambient rank mismatch")
    r = c1.ambient_rank
    k1, k2 = c1.codimension, c2.codimension
    d = r - k1 - k2
    if d < 0:
        return TropicalCycle.zero(r, d)
    s1, s2 = c1.support(), c2.support()
    if not s1.cells or not s2.cells:
        return TropicalCycle.zero(r, d)
    overlay = s1.common_refinement(s2)
    candidates = overlay.cells_of_dim(d)
    if not candidates:
        return TropicalCycle.zero(r, d)

    weighted = []
    for tau in candidates:
        x0 = tau.relative_interior_point()
        proj = quotient_projection(tau.linear_space())
        star1 = _local_star_cones(c1, x0, proj)
        star2 = _local_star_cones(c2, x0, proj)
        witness = displacement_witness(
            [c for c, _ in star1], [c for c, _ in star2], proj.rows, seq
        )
        m = 0
        detail = []
        for cone1, w1 in star1:
            for cone2, w2 in star2:
                coeff = witness.coefficient(cone1.key, cone2.key)
                if coeff:
                    m += coeff * w1 * w2
                    detail.append((cone1, cone2, coeff, w1, w2))
        weighted.append((tau, m))
        if trace is not None:
            trace.append({"cell": tau, "vector": witness.vector, "terms": detail, "weight": m})

    complex_ = PolyhedralComplex.from_maximal_cells(
        [t for t, _ in weighted], validate=False, ambient_rank=r
    )
    return TropicalCycle(complex_, {t.key: m for t, m in weighted}, d)


def cup_product(c: MinkowskiWeight, d: MinkowskiWeight, seq: int = 0) -> MinkowskiWeight:
    """Cup product of Minkowski weights by the fan displacement rule.

    Both weights must live on the same complete fan; one global generic
    vector serves the whole formula.
    """
    if c.fan.key != d.fan.key:
        raise ValueError("weights live on different fans; refine to a common fan first")
    fan = c.fan
    r = fan.ambient_rank
    k, l = c.codim, d.codim
    if k + l > r:
        return MinkowskiWeight(fan, k + l, {})
    cells = list(fan.cells.values())
    witness = displacement_witness(cells, cells, r, seq)
    weights = {}
    for tau in fan.cells_of_dim(r - k - l):
        m = 0
        for sigma in fan.cofaces(tau):
            if sigma.dim() != r - k:
                continue
            cw = c.weights.get(sigma.key, 0)
            if cw == 0:
                continue
            for sigmap in fan.cofaces(tau):
                if sigmap.dim() != r - l:
                    continue
                dw = d.weights.get(sigmap.key, 0)
                if dw:
                    m += witness.coefficient(sigma.key, sigmap.key) * cw * dw
        weights[tau.key] = m
    return MinkowskiWeight(fan, k + l, weights)


# ---------------------------------------------------------------------------
# push-forward


def push_forward(f: IntegralAffineMap, cycle: TropicalCycle) -> TropicalCycle:
    """Direct image cycle: images of cells on which the map is injective,
    weighted by lattice indices of the image lattices."""
    if f.source_rank != cycle.ambient_rank:
        raise ValueError("map source rank must match the cycle")
    n = cycle.dimension
    rp = f.target_rank
    support_cells = cycle.nonzero_cells()
    if not support_cells:
        return TropicalCycle.zero(rp, n)

    hyperplanes = set()
    support = cycle.support()
    for cell in support.cells.values():
        image = cell.image(f.matrix, f.translation)
        hyperplanes.update(image.hyperplanes())

    contributions = []
    for sigma, w in support_cells:
        basis = sigma.linear_space().vectors()
        image_dirs = [f.matrix.apply(b) for b in basis]
        if rational_rank(image_dirs) < n:
            continue  # the map collapses this cell
        image = sigma.image(f.matrix, f.translation)
        idx = lattice_index(image.linear_space(), image_dirs)
        contributions.append((image, w * idx))
    if not contributions:
        return TropicalCycle.zero(rp, n)

    complex_, weights = overlay_pieces(
        contributions, rp, extra_hyperplanes=sorted(hyperplanes)
    )
    return TropicalCycle(complex_, weights, n)


# ---------------------------------------------------------------------------
# pull-back


def pull_back(
    f: IntegralAffineMap, c_prime: TropicalCycle, seq: int = 0, trace: list | None = None
) -> TropicalCycle:
    """Pull-back cycle of codimension codim(c_prime) in the source space.

    The target cycle is completed by zero weights on the arrangement of
    its constraint hyperplanes; the source complex is the arrangement of
    their preimages.  Weights follow the displacement rule against the
    images of the source star cones.
    """
    r, rp = f.source_rank, f.target_rank
    if rp != c_prime.ambient_rank:
        raise ValueError("map target rank must match the cycle")
    k = c_prime.codimension
    out_dim = r - k
    support_cells = c_prime.nonzero_cells()
    if not support_cells or out_dim < 0:
        return TropicalCycle.zero(r, out_dim)

    target_hyps = set()
    support = c_prime.support()
    for cell in support.cells.values():
        target_hyps.update(cell.hyperplanes())
    target_hyps = sorted(target_hyps)
    arrangement_t = hyperplane_arrangement(target_hyps, rp)

    target_weights = {}
    for cell in arrangement_t.cells_of_dim(rp - k):
        w = 0
        for sigma, ws in support_cells:
            if sigma.contains(cell):
                w = ws
                break
        target_weights[cell.key] = w

    source_hyps = set()
    for a, b in target_hyps:
        an = tuple(vdot(a, col) for col in f.matrix.columns())
        bn = Fraction(b) - vdot(a, f.translation)
        if is_zero(an):
            continue
        source_hyps.add(_normalize_hyperplane(scaled_primitive(an), _rescale_offset(an, bn)))
    arrangement_s = hyperplane_arrangement(sorted(source_hyps), r)

    weighted = []
    for tau in arrangement_s.cells_of_dim(out_dim):
        m = _pull_back_weight(f, tau, arrangement_s, arrangement_t, target_weights, seq, trace)
        weighted.append((tau, m))

    skel = arrangement_s.skeleton(k)
    return TropicalCycle(skel, {t.key: m for t, m in weighted}, out_dim)


def _rescale_offset(normal, offset: Fraction) -> Fraction:
    prim = scaled_primitive(normal)
    for p, q in zip(prim, normal):
        if q:
            return offset * Fraction(p) / Fraction(q)
    return offset


def _pull_back_weight(f, tau, arrangement_s, arrangement_t, target_weights, seq, trace):
    x0 = tau.relative_interior_point()
    y0 = f.apply_point(x0)

    carrier = None
    for cell in arrangement_t.cells.values():
        if cell.contains_point(y0) and (carrier is None or cell.dim() < carrier.dim()):
            carrier = cell
    assert carrier is not None, "target arrangement is complete"

    relevant = [
        c
        for c in arrangement_t.cofaces(carrier)
        if c.key in target_weights and target_weights[c.key] != 0
    ]
    if not relevant:
        if trace is not None:
            trace.append({"cell": tau, "weight": 0, "terms": []})
        return 0

    _, proj_s, _, images_s = arrangement_s.star_with_chart(tau)
    _, proj_t, _, images_t = arrangement_t.star_with_chart(carrier)
    q_t = proj_t.rows
    fbar = proj_t @ f.matrix @ right_inverse(proj_s)
    assert fbar @ proj_s == proj_t @ f.matrix, "linear part must descend to the quotients"

    source_stars = []
    for key, image in images_s.items():
        if arrangement_s.cells[key].dim() == arrangement_s.ambient_rank:
            source_stars.append(image)
    target_stars = []
    for key, image in images_t.items():
        if key in target_weights:
            target_stars.append((image, target_weights[key]))

    mapped = [(cone, cone.image(fbar)) for cone in source_stars]
    witness = displacement_witness(
        [img for _, img in mapped], [c for c, _ in target_stars], q_t, seq
    )
    m = 0
    detail = []
    for cone, img in mapped:
        img_lattice_vecs = [fbar.apply(b) for b in cone.linear_space().vectors()]
        for tcone, tw in target_stars:
            if tw == 0 or not witness.meets(img.key, tcone.key):
                continue
            idx = lattice_index(
                Lattice.full(q_t), img_lattice_vecs + tcone.linear_space().vectors()
            )
            m += idx * tw
            detail.append((img, tcone, idx, tw))
    if trace is not None:
        trace.append({"cell": tau, "vector": witness.vector, "terms": detail, "weight": m})
    return m
