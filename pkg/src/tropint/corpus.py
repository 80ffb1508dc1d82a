"""Deterministic generation of balanced fan cycles and affine maps.

Used by the law-checking harness and the test suite.  Every generator is
balanced by construction: curve fans solve the closing-ray equation,
hypersurface fans are duals of lattice polytope edges (weighted by
lattice length), and codimension-0 / top-codimension fans are trivially
balanced.  Construction never calls the intersection calculus.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .calculus import IntegralAffineMap
from .complexes import Fan
from .cycles import TropicalCycle
from .lattice import IntegerMatrix
from .polyhedron import Polyhedron, cone_from_rays
from .vec import content, is_zero, primitive, vadd, vneg, vscale


def orthant_fan_cycle(rank: int, weight: int = 1) -> TropicalCycle:
    """The ambient space as a complete fan of orthants, constant weight."""
    if rank == 0:
        cell = Polyhedron.full_space(0)
        return TropicalCycle.from_weighted_cells([(cell, weight)])
    cones = []
    for signs in _sign_tuples(rank):
        rays = [tuple(s if i == j else 0 for j in range(rank)) for i, s in enumerate(signs)]
        cones.append(cone_from_rays(rays, ambient_rank=rank))
    return TropicalCycle.from_weighted_cells([(c, weight) for c in cones])


def _sign_tuples(rank):
    out = [()]
    for _ in range(rank):
        out = [t + (s,) for t in out for s in (1, -1)]
    return out


def origin_cycle(rank: int, weight: int = 1) -> TropicalCycle:
    cell = Polyhedron.from_generators(vertices=[(0,) * rank])
    return TropicalCycle.from_weighted_cells([(cell, weight)])


def curve_fan_cycle(rng: random.Random, rank: int, max_rays: int = 8) -> TropicalCycle:
    """Random one-dimensional balanced fan: weighted rays summing to zero."""
    while True:
        count = rng.randint(2, max_rays - 1)
        rays = []
        while len(rays) < count:
            v = tuple(rng.randint(-2, 2) for _ in range(rank))
            if is_zero(v):
                continue
            p = primitive(v)
            if p not in rays:
                rays.append(p)
        weights = [rng.randint(1, 3) for _ in rays]
        total = (0,) * rank
        for r, w in zip(rays, weights):
            total = vadd(total, vscale(w, r))
        if is_zero(total):
            pass
        else:
            closing = vneg(total)
            g = content(closing)
            closer = primitive(closing)
            if g > 3 or closer in rays:
                continue
            rays.append(closer)
            weights.append(g)
        if len(rays) > max_rays:
            continue
        cells = [(cone_from_rays([r], ambient_rank=rank), w) for r, w in zip(rays, weights)]
        return TropicalCycle.from_weighted_cells(cells)


def hypersurface_fan_cycle(rng: random.Random, rank: int) -> TropicalCycle:
    """Codim-1 skeleton of the normal fan of a random full lattice polytope,
    weighted by lattice lengths of the dual edges."""
    while True:
        points = set()
        for _ in range(rng.randint(3, 5)):
            points.add(tuple(rng.randint(0, 2) for _ in range(rank)))
        points = sorted(points)
        if len(points) < rank + 1:
            continue
        poly = Polyhedron.from_generators(vertices=points)
        if poly.dim() != rank:
            continue
        edges = [f for f in poly.faces() if f.dim() == 1]
        cells = []
        ok = True
        for edge in edges:
            u, v = edge.vertices
            direction = tuple(int(x) for x in (a - b for a, b in zip(u, v)))
            weight = content(direction)
            if weight > 3:
                ok = False
                break
            ineqs = [(tuple(int(x) for x in (a - b for a, b in zip(u, p))), Fraction(0)) for p in points]
            eqs = [(direction, Fraction(0))]
            cone = Polyhedron.from_constraints(ineqs, eqs, rank)
            assert cone is not None and cone.dim() == rank - 1
            cells.append((cone, weight))
        if not ok:
            continue
        return TropicalCycle.from_weighted_cells(cells)


def random_cycles(count: int, seed: int = 0, max_rank: int = 3) -> list[TropicalCycle]:
    """Deterministic corpus of balanced fan cycles across ranks and dims."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rank = rng.randint(1, max_rank)
        kind = rng.random()
        if rank == 1:
            if kind < 0.3:
                out.append(origin_cycle(1, rng.choice([-3, -2, -1, 1, 2, 3])))
            else:
                out.append(orthant_fan_cycle(1, rng.choice([-2, -1, 1, 2, 3])))
        elif kind < 0.15:
            out.append(origin_cycle(rank, rng.choice([-3, -1, 1, 2])))
        elif kind < 0.3:
            out.append(orthant_fan_cycle(rank, rng.choice([-2, 1, 1, 2])))
        elif kind < 0.85 or rank == 2:
            cycle = curve_fan_cycle(rng, rank)
            if rng.random() < 0.2:
                cycle = cycle.scale(rng.choice([-1, -1, 2]))
            out.append(cycle)
        else:
            out.append(hypersurface_fan_cycle(rng, rank))
    return out


def random_maps(count: int, seed: int = 0, max_rank: int = 3) -> list[IntegralAffineMap]:
    """Deterministic affine maps: projections, unimodular maps, dilations."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        src = rng.randint(1, max_rank)
        tgt = rng.randint(1, max_rank)
        kind = rng.random()
        if kind < 0.25 and src == tgt:
            mat = _random_unimodular(rng, src)
        elif kind < 0.5 and tgt <= src:
            rows = [[1 if j == i else 0 for j in range(src)] for i in range(tgt)]
            mat = IntegerMatrix(rows)
        else:
            mat = IntegerMatrix(
                [[rng.randint(-2, 2) for _ in range(src)] for _ in range(tgt)]
            )
        translation = tuple(
            Fraction(rng.randint(-2, 2), rng.choice([1, 1, 2])) for _ in range(tgt)
        )
        out.append(IntegralAffineMap(mat, translation))
    return out


def _random_unimodular(rng: random.Random, rank: int) -> IntegerMatrix:
    m = [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for _ in range(rank * 3):
        i, j = rng.randrange(rank), rng.randrange(rank)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for col in range(rank):
            m[i][col] += c * m[j][col]
    return IntegerMatrix(m)


def barycentric_style_subdivision(cycle: TropicalCycle, seed: int = 0) -> TropicalCycle:
    """A genuine subdivision of the cycle with the same support and weights.

    Overlays the complex with a small arrangement of slicing hyperplanes
    through generic rational offsets, then transports weights.
    """
    from .complexes import hyperplane_arrangement

    rng = random.Random(seed)
    r = cycle.ambient_rank
    if cycle.is_zero() or r == 0:
        return cycle
    hyps = []
    for i in range(r):
        normal = tuple(1 if j == i else (1 if j == (i + 1) % r and r > 1 else 0) for j in range(r))
        hyps.append((normal, Fraction(rng.randint(-3, 3), 2)))
    arrangement = hyperplane_arrangement(hyps, r)
    refined = cycle.support().common_refinement(arrangement)
    return cycle.induce_weights(refined)
