"""Tests for stable intersection, cup product, push-forward, pull-back."""

from fractions import Fraction

import pytest

from tropint.calculus import (
    GenericVectorError,
    IntegralAffineMap,
    compose,
    cup_product,
    displacement_witness,
    generic_vector,
    pull_back,
    push_forward,
    stable_intersect,
)
from tropint.complexes import Fan, PolyhedralComplex, hyperplane_arrangement
from tropint.cycles import MinkowskiWeight, TropicalCycle
from tropint.lattice import IntegerMatrix
from tropint.polyhedron import Polyhedron, cone_from_rays

F = Fraction


def standard_line(at=(0, 0)):
    cells = [
        (cone_from_rays([r]).translate(at), 1) for r in [(-1, 0), (0, -1), (1, 1)]
    ]
    return TropicalCycle.from_weighted_cells(cells)


def unit_cycle(rank):
    return TropicalCycle.from_weighted_cells(
        [(Polyhedron.full_space(rank), 1)]
    )


def figure_curve():
    cells = [
        (Polyhedron.from_generators(vertices=[(0, 0), (0, 1)]), 1),
        (Polyhedron.from_generators(vertices=[(0, 0)], rays=[(-1, 0)]), 2),
        (Polyhedron.from_generators(vertices=[(0, 0)], rays=[(2, -1)]), 1),
        (Polyhedron.from_generators(vertices=[(0, 1)], rays=[(-1, 0)]), 1),
        (Polyhedron.from_generators(vertices=[(0, 1), (1, 2)]), 1),
        (Polyhedron.from_generators(vertices=[(1, 2)], rays=[(1, 0)]), 1),
        (Polyhedron.from_generators(vertices=[(1, 2)], rays=[(0, 1)]), 1),
    ]
    return TropicalCycle.from_weighted_cells(cells)


def overlap_line():
    """Tropical curve whose support partly overlaps figure_curve."""
    cells = [
        (Polyhedron.from_generators(vertices=[(0, 1), (1, 2)]), 1),
        (Polyhedron.from_generators(vertices=[(0, 1)], rays=[(-1, 0)]), 1),
        (Polyhedron.from_generators(vertices=[(0, 1)], rays=[(0, -1)]), 1),
        (Polyhedron.from_generators(vertices=[(1, 2)], rays=[(1, 0)]), 1),
        (Polyhedron.from_generators(vertices=[(1, 2)], rays=[(0, 1)]), 1),
    ]
    return TropicalCycle.from_weighted_cells(cells)


def projection_x():
    return IntegralAffineMap(IntegerMatrix([[1, 0]]))


# ---------------------------------------------------------------------------
# generic vectors


def test_generic_vector_zero_fan_trivial():
    line = Fan.from_maximal_cells(
        [cone_from_rays([(1, 0)]), cone_from_rays([(0, 1)]), cone_from_rays([(-1, -1)])]
    )
    origin = Fan.from_maximal_cells([Polyhedron.from_generators(vertices=[(0, 0)])])
    wit = generic_vector(line, origin)
    assert wit.vector == (2, 3)  # the first candidate works


def test_generic_vector_two_lines():
    line = Fan.from_maximal_cells(
        [cone_from_rays([(-1, 0)]), cone_from_rays([(0, -1)]), cone_from_rays([(1, 1)])]
    )
    wit = generic_vector(line, line)
    # parallel displaced rays never meet; transverse pairs meet at most once
    for (k1, k2, coeff) in wit.checked_pairs:
        assert coeff >= 0


def test_generic_vector_with_shared_ray():
    f1 = Fan.from_maximal_cells([cone_from_rays([(1, 0)]), cone_from_rays([(-1, 0)])])
    f2 = Fan.from_maximal_cells([cone_from_rays([(1, 0)]), cone_from_rays([(0, 1)])])
    wit = generic_vector(f1, f2)
    # the witness vector must avoid the shared ray direction entirely
    shared = cone_from_rays([(1, 0)])
    assert wit.coefficient(shared.key, shared.key) == 0


# ---------------------------------------------------------------------------
# stable intersection


def test_two_generic_lines_meet_in_weight_one_point():
    a = standard_line()
    b = standard_line(at=(3, 1))
    product = stable_intersect(a, b)
    pts = product.nonzero_cells()
    assert len(pts) == 1
    cell, w = pts[0]
    assert cell.dim() == 0 and w == 1
    assert product.total_weight() == 1


def test_line_self_intersection_total_weight_one():
    a = standard_line()
    product = stable_intersect(a, a)
    assert product.total_weight() == 1
    assert all(c.dim() == 0 for c, _ in product.nonzero_cells())


def test_intersect_with_unit_is_identity():
    c = figure_curve()
    product = stable_intersect(c, unit_cycle(2))
    assert product.equals(c)
    product2 = stable_intersect(unit_cycle(2), c)
    assert product2.equals(c)


def test_figure_two_reconstruction():
    """Two overlapping curves: three points, weights {1,1,2}, the double
    point at the origin on the weight-2 ray.

    Oracle: by-hand displacement rule at each candidate with v ~ (1,-1);
    see the acceptance suite for the exhaustive version.
    """
    product = stable_intersect(figure_curve(), overlap_line())
    pts = {cell.vertices[0]: w for cell, w in product.nonzero_cells()}
    assert pts == {
        (F(0), F(0)): 2,
        (F(0), F(1)): 1,
        (F(1), F(2)): 1,
    }
    ok, _ = product.is_balanced()
    assert ok


def test_stable_intersect_commutative_on_examples():
    a = figure_curve()
    b = overlap_line()
    assert stable_intersect(a, b).equals(stable_intersect(b, a))


def test_stable_intersect_excess_codim_is_zero():
    a = standard_line()
    pt = TropicalCycle.from_weighted_cells([(Polyhedron.from_generators(vertices=[(0, 0)]), 1)])
    product = stable_intersect(a, pt)
    assert product.is_zero()


def test_stable_intersect_seed_independence():
    a = figure_curve()
    b = overlap_line()
    p0 = stable_intersect(a, b, seq=0)
    p1 = stable_intersect(a, b, seq=1)
    assert p0.equals(p1)


def test_stable_intersect_refinement_independence():
    a = standard_line()
    b = standard_line(at=(3, 1))
    # subdivide a by a hyperplane through its vertex region
    arr = hyperplane_arrangement([((1, 1), F(1))], 2)
    refined_complex = a.support().common_refinement(arr)
    a_ref = a.induce_weights(refined_complex)
    assert stable_intersect(a_ref, b).equals(stable_intersect(a, b))


def test_locality_of_stable_intersection():
    a = standard_line()
    b = standard_line()
    product = stable_intersect(a, b)
    origin = Polyhedron.from_generators(vertices=[(0, 0)])
    lhs = product.star(origin)
    rhs = stable_intersect(a.star(origin), b.star(origin))
    assert lhs.equals(rhs)


# ---------------------------------------------------------------------------
# cup product


def p2_fan():
    rays = [(1, 0), (0, 1), (-1, -1)]
    cones = [
        cone_from_rays([rays[0], rays[1]]),
        cone_from_rays([rays[1], rays[2]]),
        cone_from_rays([rays[2], rays[0]]),
    ]
    return Fan.from_maximal_cells(cones)


def test_hyperplane_weight_squares_to_point():
    fan = p2_fan()
    h = MinkowskiWeight(fan, 1, {c.key: 1 for c in fan.cells_of_dim(1)})
    hh = cup_product(h, h)
    assert hh.codim == 2
    origin = Polyhedron.from_generators(vertices=[(0, 0)])
    assert hh.weights == {origin.key: 1}


def test_cup_with_unit():
    fan = p2_fan()
    h = MinkowskiWeight(fan, 1, {c.key: 1 for c in fan.cells_of_dim(1)})
    unit = MinkowskiWeight(fan, 0, {c.key: 1 for c in fan.cells_of_dim(2)})
    hu = cup_product(h, unit)
    assert hu.codim == 1
    assert hu.weights == h.weights
    uh = cup_product(unit, h)
    assert uh.weights == h.weights


def test_cup_commutative_and_matches_stable_intersect():
    fan = p2_fan()
    h = MinkowskiWeight(fan, 1, {c.key: 1 for c in fan.cells_of_dim(1)})
    d = MinkowskiWeight(fan, 1, {c.key: 2 for c in fan.cells_of_dim(1)})
    hd = cup_product(h, d)
    dh = cup_product(d, h)
    assert hd.weights == dh.weights
    via_cycles = stable_intersect(h.as_cycle(), d.as_cycle())
    assert hd.as_cycle().equals(via_cycles)


def test_cup_requires_same_fan():
    fan = p2_fan()
    quads = Fan.from_maximal_cells(
        [
            cone_from_rays([(1, 0), (0, 1)]),
            cone_from_rays([(0, 1), (-1, 0)]),
            cone_from_rays([(-1, 0), (0, -1)]),
            cone_from_rays([(0, -1), (1, 0)]),
        ]
    )
    h1 = MinkowskiWeight(fan, 1, {c.key: 1 for c in fan.cells_of_dim(1)})
    h2 = MinkowskiWeight(quads, 1, {c.key: 0 for c in quads.cells_of_dim(1)})
    with pytest.raises(ValueError):
        cup_product(h1, h2)


# ---------------------------------------------------------------------------
# push-forward


def test_push_forward_projection_of_figure_curve():
    # Every facet of the image line carries weight 3 = 1 + 2.
    result = push_forward(projection_x(), figure_curve())
    assert result.ambient_rank == 1
    assert result.dimension == 1
    assert not result.is_zero()
    for cell, w in result.nonzero_cells():
        assert w == 3
    ok, _ = result.is_balanced()
    assert ok


def test_push_forward_identity():
    c = figure_curve()
    assert push_forward(IntegralAffineMap.identity(2), c).equals(c)


def test_push_forward_standard_line():
    result = push_forward(projection_x(), standard_line())
    # vertical ray collapses; the image is R subdivided at 0 with weights 1
    assert result.total_weight() == 2
    for cell, w in result.nonzero_cells():
        assert w == 1 and cell.dim() == 1
    assert result.is_balanced()[0]


def test_push_forward_functorial():
    c = figure_curve()
    f = IntegralAffineMap(IntegerMatrix([[1, 0], [1, 1]]))
    g = projection_x()
    lhs = push_forward(compose(g, f), c)
    rhs = push_forward(g, push_forward(f, c))
    assert lhs.equals(rhs)


def test_push_forward_collapse_to_point():
    vert = TropicalCycle.from_weighted_cells(
        [
            (cone_from_rays([(0, 1)]), 1),
            (cone_from_rays([(0, -1)]), 1),
        ]
    )
    result = push_forward(projection_x(), vert)
    assert result.is_zero()


# ---------------------------------------------------------------------------
# pull-back


def line_cycle_subdivided(at=F(1)):
    left = Polyhedron.from_generators(vertices=[(at,)], rays=[(-1,)])
    right = Polyhedron.from_generators(vertices=[(at,)], rays=[(1,)])
    return TropicalCycle.from_weighted_cells([(left, 1), (right, 1)])


def test_pull_back_of_subdivided_line():
    # codim 0 pull-back along the projection: everything has weight 1
    result = pull_back(projection_x(), line_cycle_subdivided())
    assert result.ambient_rank == 2
    assert result.dimension == 2
    assert not result.is_zero()
    for cell, w in result.nonzero_cells():
        assert w == 1
    assert result.equals(unit_cycle(2))


def test_pull_back_identity_map():
    c = line_cycle_subdivided()
    assert pull_back(IntegralAffineMap.identity(1), c).equals(c)
    c2 = figure_curve()
    assert pull_back(IntegralAffineMap.identity(2), c2).equals(c2)


def test_pull_back_point_along_projection():
    pt = TropicalCycle.from_weighted_cells(
        [(Polyhedron.from_generators(vertices=[(F(1, 2),)]), 3)]
    )
    result = pull_back(projection_x(), pt)
    # preimage of a point: the vertical line x = 1/2, weight 3
    assert result.dimension == 1
    cells = result.nonzero_cells()
    assert cells
    for cell, w in cells:
        assert w == 3
        assert all(v[0] == F(1, 2) for v in cell.vertices)
    assert result.is_balanced()[0]


def test_pull_back_functorial():
    g = projection_x()  # R^2 -> R
    f = IntegralAffineMap(IntegerMatrix([[1, 0, 0], [0, 1, 0]]))  # R^3 -> R^2
    c = line_cycle_subdivided()
    lhs = pull_back(compose(g, f), c)
    rhs = pull_back(f, pull_back(g, c))
    assert lhs.equals(rhs)


def test_pull_back_along_constant_map():
    const = IntegralAffineMap(IntegerMatrix([[0, 0]]))
    # codim 0: the unit pulls back to the unit even along a constant map
    c = line_cycle_subdivided(at=F(0))
    result = pull_back(const, c)
    assert result.equals(unit_cycle(2))
    # codim 1: every displacement coefficient vanishes; zero cycle
    pt = TropicalCycle.from_weighted_cells(
        [(Polyhedron.from_generators(vertices=[(F(0),)]), 3)]
    )
    assert pull_back(const, pt).is_zero()


def test_pull_back_support_containment():
    c = line_cycle_subdivided()
    result = pull_back(projection_x(), c)
    for cell, w in result.nonzero_cells():
        pt = cell.relative_interior_point()
        image = projection_x().apply_point(pt)
        assert c.support().contains_point(image)


# ---------------------------------------------------------------------------
# laws on examples


def test_projection_formula_example():
    f = projection_x()
    c = figure_curve()
    cp = line_cycle_subdivided()
    lhs = push_forward(f, stable_intersect(pull_back(f, cp), c))
    rhs = stable_intersect(cp, push_forward(f, c))
    assert lhs.equals(rhs)


def test_pull_back_multiplicative_example():
    f = IntegralAffineMap(IntegerMatrix([[1, 0], [0, 1]]), translation=(F(1, 2), F(0)))
    c1 = standard_line()
    c2 = standard_line(at=(2, 1))
    lhs = pull_back(f, stable_intersect(c1, c2))
    rhs = stable_intersect(pull_back(f, c1), pull_back(f, c2))
    assert lhs.equals(rhs)


def test_compose():
    f = IntegralAffineMap(IntegerMatrix([[1, 0]]))  # R^2 -> R
    g = IntegralAffineMap(IntegerMatrix([[1, 0, 0], [0, 0, 1]]))  # R^3 -> R^2
    fg = compose(f, g)
    assert fg.matrix == IntegerMatrix([[1, 0, 0]])
    ident = IntegralAffineMap.identity(2)
    assert compose(f, ident) == f
    assert compose(IntegralAffineMap.identity(1), f) == f
    with pytest.raises(ValueError):
        compose(g, f)
