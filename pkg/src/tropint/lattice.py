"""Exact integer and rational linear algebra over lattices.

Everything runs on arbitrary-precision ``int`` / ``Fraction`` values:
Hermite and Smith normal forms with their unimodular transforms, integer
kernels, sublattice indices, and primitive normal vectors of lattice
pairs.  Lattices are canonicalized to a column Hermite basis so that
equality of lattices is equality of representations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .vec import as_fractions, is_zero, primitive, scaled_primitive, vdot


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class IntegerMatrix:
    """Immutable integer matrix with exact arithmetic.

    Entries are stored row-major as nested tuples of Python ints, so all
    values are arbitrary precision and matrices are hashable.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        self.rows = len(rows)
        if rows:
            self.cols = len(rows[0])
            if any(len(r) != self.cols for r in rows):
                raise ValueError("ragged rows")
        else:
            self.cols = 0 if cols is None else cols
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntegerMatrix":
        if not columns:
            return cls(tuple(() for _ in range(rows or 0)), cols=0)
        n = len(columns[0])
        return cls(tuple(tuple(col[i] for col in columns) for i in range(n)), cols=len(columns))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(self.column(j) for j in range(self.cols)), cols=self.rows)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().entries
        return IntegerMatrix(
            tuple(tuple(vdot(row, col) for col in ot) for row in self.entries),
            cols=other.cols,
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product; works for int and Fraction inputs."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(vdot(row, v) for row in self.entries)

    def rank(self) -> int:
        return rational_rank(self.entries)

    def is_unimodular(self) -> bool:
        if self.rows != self.cols:
            return False
        inv = smith_invariants(self)
        return all(d == 1 for d in inv)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntegerMatrix({list(map(list, self.entries))!r})"


# ---------------------------------------------------------------------------
# normal forms


def _row_hnf(mat: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row Hermite form: (h, u) with h = u @ mat and u unimodular.

    Pivots are positive, entries above each pivot reduced into [0, pivot),
    zero rows at the bottom.
    """
    rows, cols = mat.rows, mat.cols
    h = [list(r) for r in mat.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    piv = 0
    for col in range(cols):
        pivot_at = None
        for i in range(piv, rows):
            if h[i][col] != 0:
                pivot_at = i
                break
        if pivot_at is None:
            continue
        if pivot_at != piv:
            h[piv], h[pivot_at] = h[pivot_at], h[piv]
            u[piv], u[pivot_at] = u[pivot_at], u[piv]
        for i in range(piv + 1, rows):
            if h[i][col] == 0:
                continue
            a, b = h[piv][col], h[i][col]
            if b % a == 0:
                q = b // a
                h[i] = [x - q * y for x, y in zip(h[i], h[piv])]
                u[i] = [x - q * y for x, y in zip(u[i], u[piv])]
            else:
                g, s, t = xgcd(a, b)
                aa, bb = a // g, b // g
                h[piv], h[i] = (
                    [s * x + t * y for x, y in zip(h[piv], h[i])],
                    [-bb * x + aa * y for x, y in zip(h[piv], h[i])],
                )
                u[piv], u[i] = (
                    [s * x + t * y for x, y in zip(u[piv], u[i])],
                    [-bb * x + aa * y for x, y in zip(u[piv], u[i])],
                )
        if h[piv][col] < 0:
            h[piv] = [-x for x in h[piv]]
            u[piv] = [-x for x in u[piv]]
        p = h[piv][col]
        for i in range(piv):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[piv])]
                u[i] = [x - q * y for x, y in zip(u[i], u[piv])]
        piv += 1
        if piv == rows:
            break
    return IntegerMatrix(h, cols=cols), IntegerMatrix(u, cols=rows)


def hermite_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Column Hermite normal form: (h, u) with h = m @ u, u unimodular."""
    ht, ut = _row_hnf(m.transpose())
    return ht.transpose(), ut.transpose()


def _smith_with_transforms(mat: IntegerMatrix) -> tuple[list[int], IntegerMatrix, IntegerMatrix]:
    """Smith form (d, u, v) with diag(d) = u @ mat @ v, u and v unimodular."""
    rows, cols = mat.rows, mat.cols
    a = [list(r) for r in mat.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_combine(i, j, m11, m12, m21, m22):
        a[i], a[j] = (
            [m11 * x + m12 * y for x, y in zip(a[i], a[j])],
            [m21 * x + m22 * y for x, y in zip(a[i], a[j])],
        )
        u[i], u[j] = (
            [m11 * x + m12 * y for x, y in zip(u[i], u[j])],
            [m21 * x + m22 * y for x, y in zip(u[i], u[j])],
        )

    def col_combine(i, j, m11, m12, m21, m22):
        for row in a:
            row[i], row[j] = m11 * row[i] + m12 * row[j], m21 * row[i] + m22 * row[j]
        for row in v:
            row[i], row[j] = m11 * row[i] + m12 * row[j], m21 * row[i] + m22 * row[j]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            col_combine(t, j0, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, rows):
                b = a[i][t]
                if b == 0:
                    continue
                p = a[t][t]
                if b % p == 0:
                    row_combine(t, i, 1, 0, -(b // p), 1)
                else:
                    g, s, w = xgcd(p, b)
                    row_combine(t, i, s, w, -(b // g), p // g)
            for j in range(t + 1, cols):
                b = a[t][j]
                if b == 0:
                    continue
                p = a[t][t]
                if b % p == 0:
                    col_combine(t, j, 1, 0, -(b // p), 1)
                else:
                    g, s, w = xgcd(p, b)
                    col_combine(t, j, s, w, -(b // g), p // g)
            if any(a[i][t] for i in range(t + 1, rows)) or any(
                a[t][j] for j in range(t + 1, cols)
            ):
                continue
            p = a[t][t]
            viol = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p != 0:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            row_combine(t, viol, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = [a[i][i] if i < cols else 0 for i in range(limit)]
    return d, IntegerMatrix(u, cols=rows), IntegerMatrix(v, cols=cols)


def smith_invariants(m: IntegerMatrix) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... (zeros last), min(rows, cols) many."""
    d, _, _ = _smith_with_transforms(m)
    return [abs(x) for x in d]


def integer_kernel(m: IntegerMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice {x in Z^cols : m @ x = 0}."""
    d, _, v = _smith_with_transforms(m)
    cols = m.cols
    out = []
    for j in range(cols):
        dj = d[j] if j < len(d) else 0
        if dj == 0:
            out.append(v.column(j))
    return out


def solve_integer(m: IntegerMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of m @ x = b, or None if none exists."""
    d, u, v = _smith_with_transforms(m)
    ub = u.apply(tuple(b))
    y = [0] * m.cols
    for i in range(m.rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            q, r = divmod(ub[i], di)
            if r != 0:
                return None
            if i < m.cols:
                y[i] = q
    return v.apply(tuple(y))


# ---------------------------------------------------------------------------
# rational elimination


def rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot column list)."""
    work = [list(as_fractions(r)) for r in rows]
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        pv = work[r][c]
        work[r] = [x / pv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [row for row in work if any(x != 0 for x in row)], pivots


def rational_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    reduced, pivots = rational_rref(vectors)
    return len(pivots)


def solve_rational(columns: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients x with sum_j x_j * columns[j] = target, or None.

    ``columns`` must be linearly independent for the answer to be unique;
    the first solution found in rref order is returned regardless.
    """
    n = len(target)
    if not columns:
        return () if is_zero(target) else None
    aug = [
        [Fraction(columns[j][i]) for j in range(len(columns))] + [Fraction(target[i])]
        for i in range(n)
    ]
    reduced, pivots = rational_rref(aug)
    ncols = len(columns)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """Sublattice of Z^r, canonically represented by a column Hermite basis."""

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, ambient_rank: int, basis: IntegerMatrix):
        self.ambient_rank = ambient_rank
        self.basis = basis
        if basis.rows != ambient_rank:
            raise ValueError("basis rows must equal ambient rank")

    @classmethod
    def from_vectors(cls, ambient_rank: int, vectors: Sequence[Sequence[int]]) -> "Lattice":
        vecs = [tuple(int(x) for x in v) for v in vectors if not is_zero(v)]
        if not vecs:
            return cls(ambient_rank, IntegerMatrix(tuple(() for _ in range(ambient_rank)), cols=0))
        m = IntegerMatrix.from_columns(vecs, rows=ambient_rank)
        h, _ = hermite_normal_form(m)
        cols = [h.column(j) for j in range(h.cols) if not is_zero(h.column(j))]
        return cls(ambient_rank, IntegerMatrix.from_columns(cols, rows=ambient_rank))

    @classmethod
    def full(cls, ambient_rank: int) -> "Lattice":
        return cls(ambient_rank, IntegerMatrix.identity(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank: int) -> "Lattice":
        return cls.from_vectors(ambient_rank, ())

    @property
    def rank(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple[int, ...]]:
        return self.basis.columns()

    def contains_vector(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        if self.rank == 0:
            return is_zero(v)
        coords = solve_rational(self.basis.columns(), v)
        if coords is None:
            return False
        return all(c.denominator == 1 for c in coords)

    def spans_rationally(self, v: Sequence[int | Fraction]) -> bool:
        """True iff v lies in the Q-span of the lattice."""
        if self.rank == 0:
            return is_zero(v)
        return solve_rational(self.basis.columns(), v) is not None

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Integer coordinates of v in the basis; raises if v is not a member."""
        coords = solve_rational(self.basis.columns(), v)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise ValueError(f"vector {tuple(v)} not in lattice")
        return tuple(int(c) for c in coords)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Lattice)
            and self.ambient_rank == other.ambient_rank
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.basis))

    def __repr__(self) -> str:
        return f"Lattice(rank {self.rank} in Z^{self.ambient_rank})"


def saturated_span(ambient_rank: int, vectors: Sequence[Sequence]) -> Lattice:
    """The lattice (Q-span of vectors) intersected with Z^ambient_rank.

    Accepts rational vectors.  Computed as the integer kernel of a basis
    of the orthogonal complement, which is saturated by construction.
    """
    span_rows = [v for v in vectors if not is_zero(v)]
    if not span_rows:
        return Lattice.zero(ambient_rank)
    reduced, pivots = rational_rref(span_rows)
    if len(pivots) == ambient_rank:
        return Lattice.full(ambient_rank)
    # rows orthogonal to the span: kernel of the reduced spanning rows
    free = [c for c in range(ambient_rank) if c not in pivots]
    ortho = []
    for fc in free:
        row = [Fraction(0)] * ambient_rank
        row[fc] = Fraction(1)
        for rr, pc in zip(reduced, pivots):
            row[pc] = -rr[fc]
        ortho.append(scaled_primitive(row))
    k = IntegerMatrix(ortho, cols=ambient_rank)
    return Lattice.from_vectors(ambient_rank, integer_kernel(k))


def lattice_index(ambient: Lattice, sub: Sequence[Sequence[int]]) -> int:
    """Index [ambient : Z-span(sub)]; 0 when the span has deficient rank.

    Raises ValueError when a vector of ``sub`` is not an ambient member.
    """
    k = ambient.rank
    coords = [ambient.coordinates(v) for v in sub if not is_zero(v)]
    if len(coords) < k or k == 0:
        return 1 if k == 0 else 0
    m = IntegerMatrix.from_columns(coords, rows=k)
    inv = smith_invariants(m)
    idx = 1
    for d in inv[:k]:
        idx *= d
    return idx


def quotient_projection(n_tau: Lattice) -> IntegerMatrix:
    """Surjection Z^r -> Z^(r - rank) with kernel exactly the (saturated) lattice.

    Rows form a basis of the functionals vanishing on the lattice; the
    induced map identifies Z^r / n_tau with Z^(r - rank).
    """
    r = n_tau.ambient_rank
    if n_tau.rank == 0:
        return IntegerMatrix.identity(r)
    rows = integer_kernel(n_tau.basis.transpose())
    lat = Lattice.from_vectors(r, rows)
    return lat.basis.transpose()


def right_inverse(k: IntegerMatrix) -> IntegerMatrix:
    """Integer right inverse of a surjective integer matrix."""
    cols = []
    q = k.rows
    for i in range(q):
        e = tuple(1 if j == i else 0 for j in range(q))
        sol = solve_integer(k, e)
        if sol is None:
            raise ValueError("matrix is not surjective over Z")
        cols.append(sol)
    return IntegerMatrix.from_columns(cols, rows=k.cols)


def primitive_normal_vector(
    n_sigma: Lattice, n_tau: Lattice, toward: Sequence
) -> tuple[int, ...]:
    """Representative in n_sigma of the generator of n_sigma/n_tau.

    ``n_tau`` must be a corank-1 saturated sublattice of ``n_sigma``; the
    returned vector generates the quotient, points to the same side of
    span(n_tau) as ``toward``, and is reduced modulo the Hermite basis of
    n_tau for reproducibility.
    """
    k = n_sigma.rank
    if n_tau.rank != k - 1:
        raise ValueError("rank difference must be exactly 1")
    sigma_cols = n_sigma.basis.columns()
    tau_coords = [n_sigma.coordinates(b) for b in n_tau.vectors()]

    # primitive functional on the sigma coordinates vanishing on tau
    if tau_coords:
        t_mat = IntegerMatrix.from_columns(tau_coords, rows=k)
        kernel = integer_kernel(t_mat.transpose())
    else:
        kernel = [(1,)]
    if len(kernel) != 1:
        raise ValueError("rank difference must be exactly 1")
    phi = primitive(kernel[0])

    # integer vector with phi(w) = 1
    g = 0
    coeffs = [0] * k
    for i, a in enumerate(phi):
        gg, s, t = xgcd(g, a)
        coeffs = [s * c for c in coeffs]
        coeffs[i] = t
        g = gg
    assert g == 1, "functional is primitive"
    w = tuple(coeffs)

    toward_coords = solve_rational(sigma_cols, toward)
    if toward_coords is None:
        raise ValueError("toward vector outside span(n_sigma)")
    side = vdot(phi, toward_coords)
    if side == 0:
        raise ValueError("toward vector lies in span(n_tau)")
    if side < 0:
        w = tuple(-x for x in w)

    v = list(IntegerMatrix.from_columns(sigma_cols, rows=n_sigma.ambient_rank).apply(w))
    # canonical representative: reduce against the Hermite basis of n_tau
    for b in n_tau.vectors():
        p = next(i for i, x in enumerate(b) if x != 0)
        q = v[p] // b[p]
        if q:
            for i in range(len(v)):
                v[i] -= q * b[i]
    return tuple(v)
