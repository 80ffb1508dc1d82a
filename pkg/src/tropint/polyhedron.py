"""Integral R-affine polyhedra with exact dual representations.

A polyhedron carries both a generator description (rational vertices,
primitive integer rays, a lineality lattice) and a constraint
description (primitive integer normals with rational offsets).  The two
are kept consistent by an exact double description conversion on the
homogenization cone; the stored form is canonical, so structural
equality is set equality.

Cones are polyhedra whose single anchor vertex is the origin; there is
no separate cone class, only the :func:`cone_from_rays` factory and the
``is_cone`` / ``is_strictly_convex`` predicates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import Lattice, rational_rank, rational_rref, saturated_span, solve_rational
from .vec import (
    as_fractions,
    clear_denominators,
    is_zero,
    primitive,
    scaled_primitive,
    vadd,
    vdot,
    vscale,
    vsub,
)

Ineq = tuple[tuple[int, ...], Fraction]  # normal . x >= offset
Eq = tuple[tuple[int, ...], Fraction]  # normal . x == offset


# ---------------------------------------------------------------------------
# double description on cones


def _rank_of(vectors) -> int:
    return rational_rank(vectors) if vectors else 0


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> tuple[list, list]:
    """Minimal generators (rays, lineality) of {x in R^dim : a.x >= 0}.

    Incremental double description with exact integer arithmetic.  Rays
    come back primitive; the lineality basis spans the full lineality
    space of the cone.
    """
    lin = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    processed: list[tuple[int, ...]] = []

    for row in rows:
        a = tuple(row)
        if is_zero(a):
            continue
        lin_vals = [vdot(a, l) for l in lin]
        if any(lin_vals):
            idx = next(i for i, val in enumerate(lin_vals) if val)
            l0, val0 = lin[idx], lin_vals[idx]
            if val0 < 0:
                l0, val0 = tuple(-x for x in l0), -val0
            new_lin = [
                primitive(vsub(vscale(val0, l), vscale(v, l0)))
                for i, (l, v) in enumerate(zip(lin, lin_vals))
                if i != idx
            ]
            new_rays = []
            for r in rays:
                rv = vdot(a, r)
                new_rays.append(primitive(vsub(vscale(val0, r), vscale(rv, l0))))
            new_rays.append(l0)
            lin, rays = new_lin, new_rays
            processed.append(a)
            continue

        vals = [vdot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            processed.append(a)
            continue

        tight = [
            frozenset(i for i, c in enumerate(processed) if vdot(c, r) == 0) for r in rays
        ]
        keep = [r for r, v in zip(rays, vals) if v >= 0]
        new_rays = list(keep)
        seen = set(new_rays)
        lin_count = len(lin)
        for ip, (rp, vp) in enumerate(zip(rays, vals)):
            if vp <= 0:
                continue
            for im, (rm, vm) in enumerate(zip(rays, vals)):
                if vm >= 0:
                    continue
                common = tight[ip] & tight[im]
                face_gens = list(lin) + [
                    r for r, z in zip(rays, tight) if common <= z
                ]
                if _rank_of(face_gens) != lin_count + 2:
                    continue
                combo = primitive(vsub(vscale(vp, rm), vscale(vm, rp)))
                if combo not in seen:
                    seen.add(combo)
                    new_rays.append(combo)
        rays = new_rays
        processed.append(a)

    return rays, lin


def _feasible_homogeneous(rows: Sequence[Sequence[int]], dim: int) -> bool:
    """True iff the homogenization cone has a generator with x0 > 0."""
    rays, _ = extreme_rays(rows, dim)
    return any(r[0] > 0 for r in rays)


def feasible(
    inequalities: Iterable[tuple[Sequence, object]],
    equations: Iterable[tuple[Sequence, object]],
    rank: int,
) -> bool:
    """Exact feasibility of a system a.x >= b / a.x == b."""
    rows = [(1,) + (0,) * rank]
    for a, b in inequalities:
        rows.append(clear_denominators((-Fraction(b),) + as_fractions(a)))
    for a, b in equations:
        row = clear_denominators((-Fraction(b),) + as_fractions(a))
        rows.append(row)
        rows.append(tuple(-x for x in row))
    return _feasible_homogeneous(rows, rank + 1)


# ---------------------------------------------------------------------------
# polyhedron


_INTERN: dict = {}


class Polyhedron:
    """Nonempty integral R-affine polyhedron in canonical double form.

    Use :meth:`from_generators` / :meth:`from_constraints`; the raw
    constructor expects already-canonical data.  Empty intersections are
    reported as ``None`` by the factories, never as an object.
    """

    __slots__ = (
        "ambient_rank",
        "vertices",
        "rays",
        "lineality",
        "inequalities",
        "equations",
        "_dim",
        "_linear_space",
        "_relint",
        "_faces",
        "_facets",
        "_face_keys",
    )

    def __init__(self, ambient_rank, vertices, rays, lineality, inequalities, equations):
        self.ambient_rank = ambient_rank
        self.vertices = vertices
        self.rays = rays
        self.lineality = lineality
        self.inequalities = inequalities
        self.equations = equations
        self._dim = None
        self._linear_space = None
        self._relint = None
        self._faces = None
        self._facets = None
        self._face_keys = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_generators(
        cls,
        vertices: Sequence[Sequence] = (),
        rays: Sequence[Sequence[int]] = (),
        lineality: Sequence[Sequence[int]] = (),
        ambient_rank: int | None = None,
    ) -> "Polyhedron":
        gens = list(vertices) + list(rays) + list(lineality)
        if ambient_rank is None:
            if not gens:
                raise ValueError("empty polyhedron")
            ambient_rank = len(gens[0])
        verts = [as_fractions(v) for v in vertices]
        if not verts:
            if not rays and not lineality:
                raise ValueError("empty polyhedron")
            verts = [as_fractions((0,) * ambient_rank)]
        raying = [tuple(int(x) for x in r) for r in rays if not is_zero(r)]
        lining = [tuple(int(x) for x in l) for l in lineality if not is_zero(l)]
        ineqs, eqs = _generators_to_constraints(verts, raying, lining, ambient_rank)
        poly = _from_constraints_raw(ineqs, eqs, ambient_rank)
        assert poly is not None, "generator description cannot be empty"
        return poly

    @classmethod
    def from_constraints(
        cls,
        inequalities: Sequence[tuple[Sequence, object]] = (),
        equations: Sequence[tuple[Sequence, object]] = (),
        ambient_rank: int | None = None,
    ) -> "Polyhedron | None":
        if ambient_rank is None:
            first = list(inequalities) + list(equations)
            if not first:
                raise ValueError("ambient rank required for unconstrained polyhedron")
            ambient_rank = len(first[0][0])
        return _from_constraints_raw(list(inequalities), list(equations), ambient_rank)

    @classmethod
    def full_space(cls, ambient_rank: int) -> "Polyhedron":
        return cls.from_constraints((), (), ambient_rank)

    # -- canonical identity --------------------------------------------

    @property
    def key(self):
        return (self.ambient_rank, self.vertices, self.rays, self.lineality)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return (
            f"Polyhedron(dim {self.dim()} in R^{self.ambient_rank}, "
            f"{len(self.vertices)}V {len(self.rays)}R {len(self.lineality)}L)"
        )

    # -- basic geometry -------------------------------------------------

    def dim(self) -> int:
        if self._dim is None:
            dirs = [vsub(v, self.vertices[0]) for v in self.vertices[1:]]
            dirs += list(self.rays) + list(self.lineality)
            self._dim = _rank_of(dirs)
        return self._dim

    def linear_space(self) -> Lattice:
        """Saturated lattice of the direction space (N_sigma)."""
        if self._linear_space is None:
            dirs = [vsub(v, self.vertices[0]) for v in self.vertices[1:]]
            dirs += list(self.rays) + list(self.lineality)
            self._linear_space = saturated_span(self.ambient_rank, dirs)
        return self._linear_space

    def relative_interior_point(self) -> tuple[Fraction, ...]:
        if self._relint is None:
            n = len(self.vertices)
            acc = tuple(
                sum(v[i] for v in self.vertices) / n for i in range(self.ambient_rank)
            )
            for r in self.rays:
                acc = vadd(acc, as_fractions(r))
            self._relint = acc
        return self._relint

    def is_cone(self) -> bool:
        zero_pt = as_fractions((0,) * self.ambient_rank)
        return self.vertices == (zero_pt,)

    def is_strictly_convex(self) -> bool:
        return self.is_cone() and not self.lineality

    def contains_point(self, point: Sequence) -> bool:
        p = as_fractions(point)
        return all(vdot(a, p) == b for a, b in self.equations) and all(
            vdot(a, p) >= b for a, b in self.inequalities
        )

    def contains(self, other: "Polyhedron") -> bool:
        """Exact containment via the constraint description."""
        for v in other.vertices:
            if not self.contains_point(v):
                return False
        for r in list(other.rays) + list(other.lineality) + [
            tuple(-x for x in l) for l in other.lineality
        ]:
            for a, b in self.equations:
                if vdot(a, r) != 0:
                    return False
            for a, b in self.inequalities:
                if vdot(a, r) < 0:
                    return False
        return True

    # -- operations -----------------------------------------------------

    def intersect(self, other: "Polyhedron") -> "Polyhedron | None":
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient rank mismatch")
        return _from_constraints_raw(
            list(self.inequalities) + list(other.inequalities),
            list(self.equations) + list(other.equations),
            self.ambient_rank,
        )

    def translate(self, v: Sequence) -> "Polyhedron":
        shift = as_fractions(v)
        if len(shift) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        ineqs = [(a, b + vdot(a, shift)) for a, b in self.inequalities]
        eqs = [(a, b + vdot(a, shift)) for a, b in self.equations]
        verts = tuple(sorted(_reduce_mod_lineality(vadd(p, shift), self.lineality) for p in self.vertices))
        ineqs2, eqs2 = _canonicalize_constraints(ineqs, eqs)
        return _intern(
            Polyhedron(self.ambient_rank, verts, self.rays, self.lineality, ineqs2, eqs2)
        )

    def image(self, matrix, translation: Sequence | None = None) -> "Polyhedron":
        """Image under an integral linear map plus optional translation."""
        t = as_fractions(translation) if translation is not None else (Fraction(0),) * matrix.rows
        verts = [vadd(matrix.apply(v), t) for v in self.vertices]
        rays = [r for r in (matrix.apply(x) for x in self.rays) if not is_zero(r)]
        lin = [l for l in (matrix.apply(x) for x in self.lineality) if not is_zero(l)]
        return Polyhedron.from_generators(verts, rays, lin, ambient_rank=matrix.rows)

    def faces(self) -> tuple["Polyhedron", ...]:
        """All faces including the polyhedron itself, closed under the relation."""
        if self._faces is None:
            out = {self.key: self}
            for facet in self.facets():
                for f in facet.faces():
                    out.setdefault(f.key, f)
            self._faces = tuple(out[k] for k in sorted(out))
            self._face_keys = frozenset(out)
        return self._faces

    def facets(self) -> tuple["Polyhedron", ...]:
        if self._facets is None:
            found = {}
            for a, b in self.inequalities:
                face = _from_constraints_raw(
                    list(self.inequalities),
                    list(self.equations) + [(a, b)],
                    self.ambient_rank,
                )
                assert face is not None, "facet inequality must be supporting"
                found.setdefault(face.key, face)
            self._facets = tuple(found[k] for k in sorted(found))
        return self._facets

    def face_keys(self) -> frozenset:
        if self._face_keys is None:
            self.faces()
        return self._face_keys

    def has_face(self, other: "Polyhedron") -> bool:
        return other.key in self.face_keys()

    def hyperplanes(self) -> list[Eq]:
        """Constraint hyperplanes (facets and equations), sign-normalized."""
        out = []
        for a, b in list(self.inequalities) + list(self.equations):
            out.append(_normalize_hyperplane(a, b))
        return out


def _normalize_hyperplane(a: Sequence[int], b) -> Eq:
    for x in a:
        if x > 0:
            return (tuple(a), Fraction(b))
        if x < 0:
            return (tuple(-y for y in a), -Fraction(b))
    return (tuple(a), Fraction(b))


def _intern(poly: Polyhedron) -> Polyhedron:
    cached = _INTERN.get(poly.key)
    if cached is None:
        _INTERN[poly.key] = poly
        return poly
    return cached


def cone_from_rays(
    rays: Sequence[Sequence[int]],
    lineality: Sequence[Sequence[int]] = (),
    ambient_rank: int | None = None,
) -> Polyhedron:
    """Cone generated by rays and lineality, anchored at the origin."""
    if ambient_rank is None:
        gens = list(rays) + list(lineality)
        if not gens:
            raise ValueError("ambient rank required for the zero cone")
        ambient_rank = len(gens[0])
    return Polyhedron.from_generators(
        vertices=[(0,) * ambient_rank], rays=rays, lineality=lineality, ambient_rank=ambient_rank
    )


# ---------------------------------------------------------------------------
# conversion pipeline


def _generators_to_constraints(verts, rays, lin, rank):
    """Irredundant constraints of conv(verts) + cone(rays) + span(lin)."""
    rows = []
    for v in verts:
        rows.append(clear_denominators((Fraction(1),) + v))
    for r in rays:
        rows.append((0,) + tuple(r))
    eq_rows = [(0,) + tuple(l) for l in lin]
    dd_rows = list(rows)
    for e in eq_rows:
        dd_rows.append(e)
        dd_rows.append(tuple(-x for x in e))
    drays, dlin = extreme_rays(dd_rows, rank + 1)
    ineqs = []
    eqs = []
    for y in drays:
        a = y[1:]
        if is_zero(a):
            continue  # the trivial x0 >= 0 facet
        ineqs.append((a, -Fraction(y[0])))
    for y in dlin:
        a = y[1:]
        if is_zero(a):
            continue
        eqs.append((a, -Fraction(y[0])))
    return ineqs, eqs


def _canonicalize_constraints(ineqs, eqs):
    """Canonical (inequalities, equations): RREF'd equations, inequalities
    reduced modulo the equation rowspace, primitive normals, sorted."""
    eq_rows = [as_fractions(a) + (Fraction(b),) for a, b in eqs]
    reduced, pivots = rational_rref(eq_rows) if eq_rows else ([], [])
    canon_eqs = []
    for row in reduced:
        prim = scaled_primitive(row)
        canon_eqs.append((prim[:-1], Fraction(prim[-1])))

    canon_ineqs = set()
    for a, b in ineqs:
        row = list(as_fractions(a)) + [Fraction(b)]
        for rr, pc in zip(reduced, pivots):
            f = row[pc]
            if f:
                row = [x - f * y for x, y in zip(row, rr)]
        normal = row[:-1]
        if all(x == 0 for x in normal):
            continue  # implied by the equations
        prim_normal = scaled_primitive(normal)
        scale = None
        for p, q in zip(prim_normal, normal):
            if q != 0:
                scale = Fraction(p) / q
                break
        canon_ineqs.add((prim_normal, Fraction(row[-1]) * scale))
    return tuple(sorted(canon_ineqs)), tuple(canon_eqs)


def _reduce_mod_lineality(point, lin):
    """Canonical representative of point + span(lin): orthogonal projection."""
    if not lin:
        return as_fractions(point)
    gram = [[Fraction(vdot(a, b)) for b in lin] for a in lin]
    rhs = [Fraction(vdot(l, point)) for l in lin]
    coeffs = solve_rational([tuple(col) for col in zip(*gram)], rhs)
    assert coeffs is not None
    out = as_fractions(point)
    for c, l in zip(coeffs, lin):
        out = vsub(out, vscale(c, as_fractions(l)))
    return out


def _from_constraints_raw(ineqs, eqs, rank) -> Polyhedron | None:
    rows = [(1,) + (0,) * rank]
    norm_ineqs = []
    norm_eqs = []
    for a, b in ineqs:
        row = clear_denominators((-Fraction(b),) + as_fractions(a))
        rows.append(row)
        norm_ineqs.append((tuple(row[1:]), -Fraction(row[0])))
    for a, b in eqs:
        row = clear_denominators((-Fraction(b),) + as_fractions(a))
        rows.append(row)
        rows.append(tuple(-x for x in row))
        norm_eqs.append((tuple(row[1:]), -Fraction(row[0])))
    crays, clin = extreme_rays(rows, rank + 1)

    vertices = []
    rec_rays = []
    for r in crays:
        if r[0] > 0:
            vertices.append(tuple(Fraction(x, r[0]) for x in r[1:]))
        else:
            rec_rays.append(primitive(r[1:]))
    if not vertices:
        return None
    lineality = [l[1:] for l in clin]
    assert all(l[0] == 0 for l in clin)

    # canonical generator side
    lin_lat = saturated_span(rank, lineality) if lineality else None
    lin_basis = tuple(lin_lat.vectors()) if lin_lat else ()
    verts = tuple(sorted({_reduce_mod_lineality(v, lin_basis) for v in vertices}))
    rays_out = tuple(
        sorted({scaled_primitive(_reduce_mod_lineality(r, lin_basis)) for r in rec_rays})
    )

    # canonical irredundant constraint side from the minimal generators
    min_ineqs, min_eqs = _generators_to_constraints(list(verts), list(rays_out), list(lin_basis), rank)
    canon_ineqs, canon_eqs = _canonicalize_constraints(min_ineqs, min_eqs)
    return _intern(Polyhedron(rank, verts, rays_out, lin_basis, canon_ineqs, canon_eqs))
