"""Exact tropical intersection theory on R^n.

Tropical cycles as weighted integral R-affine polyhedral complexes, the
stable intersection product via the fan displacement rule, and
push-forward / pull-back along integral affine maps.  All arithmetic is
arbitrary-precision integer/rational; no floats anywhere.
"""

from .calculus import (
    DisplacementWitness,
    GenericVectorError,
    IntegralAffineMap,
    compose,
    cup_product,
    generic_vector,
    pull_back,
    push_forward,
    stable_intersect,
)
from .complexes import Fan, NotAComplexError, PolyhedralComplex, hyperplane_arrangement
from .cycles import MinkowskiWeight, TropicalCycle, UnbalancedCycleError
from .lattice import (
    IntegerMatrix,
    Lattice,
    hermite_normal_form,
    lattice_index,
    primitive_normal_vector,
    smith_invariants,
)
from .polyhedron import Polyhedron, cone_from_rays

__all__ = [
    "DisplacementWitness",
    "Fan",
    "GenericVectorError",
    "IntegerMatrix",
    "IntegralAffineMap",
    "Lattice",
    "MinkowskiWeight",
    "NotAComplexError",
    "PolyhedralComplex",
    "Polyhedron",
    "TropicalCycle",
    "UnbalancedCycleError",
    "compose",
    "cone_from_rays",
    "cup_product",
    "generic_vector",
    "hermite_normal_form",
    "hyperplane_arrangement",
    "lattice_index",
    "primitive_normal_vector",
    "pull_back",
    "push_forward",
    "smith_invariants",
    "stable_intersect",
]
