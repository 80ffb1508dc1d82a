"""Tests for polyhedral complexes, fans, refinement, stars, completeness."""

import random
from fractions import Fraction

import pytest

from tropint.complexes import (
    Fan,
    NotAComplexError,
    PolyhedralComplex,
    hyperplane_arrangement,
    overlay_pieces,
    split_by_hyperplanes,
)
from tropint.polyhedron import Polyhedron, cone_from_rays

F = Fraction


def standard_line_cells():
    return [cone_from_rays([r]) for r in [(-1, 0), (0, -1), (1, 1)]]


def test_from_maximal_standard_line():
    c = PolyhedralComplex.from_maximal_cells(standard_line_cells())
    assert len(c.maximal_keys) == 3
    # 1 vertex + 3 rays
    assert len(c.cells) == 4
    assert c.is_pure(1)
    assert not c.is_pure(2)


def test_crossing_lines_not_a_complex():
    horizontal = Polyhedron.from_generators(lineality=[(1, 0)], vertices=[(0, 0)])
    diagonal = Polyhedron.from_generators(lineality=[(1, 1)], vertices=[(1, 0)])
    with pytest.raises(NotAComplexError):
        PolyhedralComplex.from_maximal_cells([horizontal, diagonal])


def test_empty_complex_vacuously_pure():
    c = PolyhedralComplex.empty(2)
    assert c.is_pure(1)
    assert not c.is_complete()


def test_skeleton():
    fan = quadrant_fan()
    assert len(fan.skeleton(2).cells) == 1  # just the origin
    assert fan.skeleton(0) == fan
    sk1 = fan.skeleton(1)
    assert all(c.dim() <= 1 for c in sk1.cells.values())
    assert len(sk1.maximal_keys) == 4


def quadrant_fan():
    quads = [
        cone_from_rays([(1, 0), (0, 1)]),
        cone_from_rays([(0, 1), (-1, 0)]),
        cone_from_rays([(-1, 0), (0, -1)]),
        cone_from_rays([(0, -1), (1, 0)]),
    ]
    return Fan.from_maximal_cells(quads)


def test_common_refinement_idempotent():
    c = PolyhedralComplex.from_maximal_cells(standard_line_cells())
    assert c.common_refinement(c) == c


def test_common_refinement_subdivision():
    axis = PolyhedralComplex.from_maximal_cells(
        [Polyhedron.from_generators(vertices=[(0,)], lineality=[(1,)])]
    )
    split = PolyhedralComplex.from_maximal_cells(
        [cone_from_rays([(1,)], ambient_rank=1), cone_from_rays([(-1,)], ambient_rank=1)]
    )
    assert axis.common_refinement(split) == split
    assert split.common_refinement(axis) == split


def test_common_refinement_two_translated_lines():
    a = PolyhedralComplex.from_maximal_cells(standard_line_cells())
    moved = [cell.translate((3, 1)) for cell in standard_line_cells()]
    b = PolyhedralComplex.from_maximal_cells(moved)
    overlay = a.common_refinement(b)
    # two tropical lines in general position meet in one point
    assert len(overlay.cells) == 1
    (cell,) = overlay.cells.values()
    assert cell.dim() == 0


def test_common_refinement_commutative_associative():
    rng = random.Random(3)
    fans = []
    for _ in range(3):
        rays = []
        while len(rays) < 3:
            r = (rng.randint(-2, 2), rng.randint(-2, 2))
            if any(r) and r not in rays:
                rays.append(r)
        fans.append(PolyhedralComplex.from_maximal_cells([cone_from_rays([r]) for r in rays]))
    a, b, c = fans
    assert a.common_refinement(b) == b.common_refinement(a)
    lhs = a.common_refinement(b).common_refinement(c)
    rhs = a.common_refinement(b.common_refinement(c))
    assert lhs == rhs


def test_star_at_vertex_of_line():
    c = PolyhedralComplex.from_maximal_cells(standard_line_cells())
    origin = Polyhedron.from_generators(vertices=[(0, 0)])
    star = c.star(origin)
    assert isinstance(star, Fan)
    assert star.ambient_rank == 2
    assert len(star.cells) == len(c.cells)
    rays = {cell.rays[0] for cell in star.cells.values() if cell.dim() == 1}
    assert rays == {(-1, 0), (0, -1), (1, 1)}


def test_star_at_maximal_cell():
    c = PolyhedralComplex.from_maximal_cells(standard_line_cells())
    ray = cone_from_rays([(1, 1)])
    star = c.star(ray)
    assert star.ambient_rank == 1
    assert len(star.cells) == 1
    (cell,) = star.cells.values()
    assert cell.dim() == 0


def test_star_of_fan_at_origin_is_itself():
    fan = quadrant_fan()
    origin = Polyhedron.from_generators(vertices=[(0, 0)])
    star = fan.star(origin)
    assert star.key == fan.key


def test_star_cell_count_matches_cofaces():
    fan = quadrant_fan()
    for cell in fan.cells.values():
        star = fan.star(cell)
        assert len(star.cells) == len(fan.cofaces(cell))


def test_star_requires_cell():
    fan = quadrant_fan()
    outside = Polyhedron.from_generators(vertices=[(5, 5)])
    with pytest.raises(ValueError):
        fan.star(outside)


def test_is_complete():
    assert quadrant_fan().is_complete()
    half = PolyhedralComplex.from_maximal_cells(
        [Polyhedron.from_constraints([((0, 1), 0)], [], 2)]
    )
    assert not half.is_complete()
    line = PolyhedralComplex.from_maximal_cells(
        [cone_from_rays([(1,)], ambient_rank=1), cone_from_rays([(-1,)], ambient_rank=1)]
    )
    assert line.is_complete()


def test_is_complete_probe_oracle():
    rng = random.Random(20240601)
    complexes = [
        quadrant_fan(),
        PolyhedralComplex.from_maximal_cells(standard_line_cells()),
        PolyhedralComplex.from_maximal_cells(
            [Polyhedron.from_constraints([((0, 1), 0)], [], 2)]
        ),
        hyperplane_arrangement([((1, 2), F(1)), ((1, -1), F(0))], 2),
    ]
    for comp in complexes:
        verdict = comp.is_complete()
        covered = True
        for _ in range(1000):
            pt = (F(rng.randint(-60, 60), rng.randint(1, 7)), F(rng.randint(-60, 60), rng.randint(1, 7)))
            if not comp.contains_point(pt):
                covered = False
                break
        assert verdict == covered


def test_refinement_of_complete_is_complete():
    arr1 = hyperplane_arrangement([((1, 0), F(0))], 2)
    arr2 = hyperplane_arrangement([((0, 1), F(0)), ((1, 1), F(1))], 2)
    both = arr1.common_refinement(arr2)
    assert arr1.is_complete() and arr2.is_complete() and both.is_complete()


def test_hyperplane_arrangement_two_lines():
    arr = hyperplane_arrangement([((1, 0), F(0)), ((0, 1), F(0))], 2)
    assert arr.is_complete()
    dims = sorted(c.dim() for c in arr.cells.values())
    assert dims == [0, 1, 1, 1, 1, 2, 2, 2, 2]


def test_split_by_hyperplanes():
    seg = Polyhedron.from_generators(vertices=[(0, 0), (4, 0)])
    pieces = split_by_hyperplanes(seg, [((1, 0), F(1)), ((1, 0), F(3)), ((0, 1), F(2))])
    assert len(pieces) == 3
    total = sorted(p.vertices for p in pieces)
    assert total[0][0] == (F(0), F(0))


def test_overlay_pieces_weight_sum():
    a = Polyhedron.from_generators(vertices=[(0,), (2,)])
    b = Polyhedron.from_generators(vertices=[(1,), (3,)])
    comp, weights = overlay_pieces([(a, 1), (b, 2)], 1)
    # pieces: [0,1] w1, [1,2] w3, [2,3] w2
    by_span = {}
    for key, w in weights.items():
        piece = comp.cells[key]
        lo = min(v[0] for v in piece.vertices)
        hi = max(v[0] for v in piece.vertices)
        by_span[(lo, hi)] = w
    assert by_span == {(0, 1): 1, (1, 2): 3, (2, 3): 2}
