"""Exact rational polyhedral cones and integer lattices.

Cones are described by integer generators and, after conversion, by their
irredundant inward facet normals.  The conversion is a double description
run; nothing here uses floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp


class ConeError(ValueError):
    pass


class NotPointedError(ConeError):
    pass


class NotFullDimensionalError(ConeError):
    pass


class EnumerationCapError(RuntimeError):
    pass


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def primitive(v):
    """Scale a rational vector to the primitive integer vector on the same ray."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(x // g for x in ints)


def _rref(rows):
    """Reduced row echelon form over the rationals: ``(nonzero rows, pivot columns)``."""
    M = [[Fraction(x) for x in r] for r in rows]
    n = len(M[0]) if M else 0
    pivots, r = [], 0
    for col in range(n):
        k = next((i for i in range(r, len(M)) if M[i][col]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rational_rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return len(_rref(rows)[1])


def _pivot_columns(rows, n):
    """Coordinates on which the row span projects isomorphically."""
    if not rows:
        return []
    return _rref(rows)[1]


class _Coordinates:
    """Exact coordinates with respect to independent integer rows, via a pivot-column inverse."""

    def __init__(self, basis_rows):
        self.rows = [tuple(r) for r in basis_rows]
        r = len(self.rows)
        if r == 0:
            self.pivots, self.inv = [], []
            return
        self.pivots = _rref(self.rows)[1]
        if len(self.pivots) != r:
            raise ValueError("basis rows are not independent")
        # invert the pivot submatrix by reducing [S | I]; keep it as integers over one denominator
        aug = [[row[p] for p in self.pivots] + [int(i == j) for j in range(r)] for i, row in enumerate(self.rows)]
        red, _ = _rref(aug)
        inv = [red[i][r:] for i in range(r)]
        den = 1
        for row in inv:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        self.den = den
        self.inv = [[int(x * den) for x in row] for row in inv]

    def __call__(self, v):
        r = len(self.rows)
        if r == 0:
            return [] if not any(v) else None
        w = [v[p] for p in self.pivots]
        # x B[:, P] = w  =>  x = w inv; work with den * x in integers
        num = [sum(w[i] * self.inv[i][j] for i in range(r)) for j in range(r)]
        den = self.den
        for k in range(len(v)):
            if sum(num[i] * self.rows[i][k] for i in range(r)) != den * v[k]:
                return None
        return [Fraction(n, den) for n in num]


def _solve_rational(basis_rows, v):
    """Coefficients ``x`` (Fractions) with ``sum x_i basis_rows[i] == v``, or ``None``."""
    return _Coordinates(basis_rows)(v)


# -- double description ------------------------------------------------------

def extreme_rays(A) -> list:
    """Primitive extreme rays of ``{y : A y >= 0}``; ``A`` must have full column rank."""
    A = [tuple(int(x) for x in r) for r in A]
    d = len(A[0]) if A else 0
    if d == 0:
        return []
    if rational_rank(A) < d:
        raise ConeError("constraint matrix does not have full column rank")
    # pick d independent rows for the starting simplicial cone
    basis_idx = []
    for i, r in enumerate(A):
        if rational_rank([A[j] for j in basis_idx] + [r]) > len(basis_idx):
            basis_idx.append(i)
        if len(basis_idx) == d:
            break
    Binv = Matrix([list(A[i]) for i in basis_idx]).inv()
    rays = [primitive([Binv[r, c] for r in range(d)]) for c in range(d)]
    processed = list(basis_idx)
    zero_sets = [frozenset(j for j in processed if dot(A[j], r) == 0) for r in rays]

    for i in range(len(A)):
        if i in basis_idx:
            continue
        a = A[i]
        vals = [dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos + zer]
        new_zero = [zero_sets[k] for k in pos] + [zero_sets[k] | {i} for k in zer]
        for p in pos:
            for n in neg:
                common = zero_sets[p] & zero_sets[n]
                if len(common) < d - 2:
                    continue
                adjacent = all(
                    k in (p, n) or not common <= zero_sets[k] for k in range(len(rays)))
                if not adjacent:
                    continue
                vp, vn = vals[p], vals[n]
                r = primitive([vp * x - vn * y for x, y in zip(rays[n], rays[p])])
                new_rays.append(r)
                new_zero.append(common | {i})
        rays, zero_sets = new_rays, new_zero
        processed.append(i)
    # deduplicate
    out = []
    for r in rays:
        if any(r) and r not in out:
            out.append(r)
    return out


# -- cones -------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A face of a cone, recorded by the indices of the rays it contains and of the facets tight on it."""

    rays: frozenset
    facets: frozenset
    dim: int

    def __le__(self, other: "Face") -> bool:
        return self.rays <= other.rays


class Cone:
    """A pointed, full-dimensional rational cone in ``R^d`` given by integer generators."""

    def __init__(self, generators, ambient_dim: int, facets, rays):
        self.generators = [tuple(g) for g in generators]
        self.ambient_dim = ambient_dim
        self.facets = [tuple(f) for f in facets]
        self.rays = [tuple(r) for r in rays]

    def __repr__(self):
        return f"Cone(d={self.ambient_dim}, rays={self.rays})"

    @property
    def dim(self) -> int:
        return self.ambient_dim

    def _check(self, v):
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in a cone of ambient dimension {self.ambient_dim}")

    def contains(self, v) -> bool:
        self._check(v)
        return all(dot(f, v) >= 0 for f in self.facets)

    def in_relint(self, v) -> bool:
        self._check(v)
        if self.ambient_dim == 0:
            return True
        return all(dot(f, v) > 0 for f in self.facets)

    def tight_facets(self, v) -> frozenset:
        return frozenset(i for i, f in enumerate(self.facets) if dot(f, v) == 0)

    def face_of_facets(self, facet_set) -> Face:
        facet_set = frozenset(facet_set)
        rays = frozenset(k for k, r in enumerate(self.rays) if all(dot(self.facets[i], r) == 0 for i in facet_set))
        return self._face_from_rays(rays)

    def _face_from_rays(self, rays) -> Face:
        rays = frozenset(rays)
        tight = frozenset(i for i, f in enumerate(self.facets) if all(dot(f, self.rays[k]) == 0 for k in rays))
        closure = frozenset(k for k, r in enumerate(self.rays) if all(dot(self.facets[i], r) == 0 for i in tight))
        return Face(closure, tight, rational_rank([self.rays[k] for k in closure]))

    def face_of_point(self, v) -> Face:
        """The face whose relative interior contains ``v`` (``v`` must lie in the cone)."""
        if not self.contains(v):
            raise ConeError(f"{tuple(v)} is not in the cone")
        return self.face_of_facets(self.tight_facets(v))

    def face_spanned_by(self, vectors) -> Face | None:
        """The face equal to ``cone(vectors)``, or ``None`` if ``cone(vectors)`` is not a face."""
        vectors = [tuple(v) for v in vectors]
        if not all(self.contains(v) for v in vectors):
            return None
        tight = frozenset(i for i, f in enumerate(self.facets) if all(dot(f, v) == 0 for v in vectors))
        F = self.face_of_facets(tight)
        if rational_rank(vectors) != F.dim:
            return None
        sub = cone_hull(vectors)
        if not all(sub.contains_vector(self.rays[k]) for k in F.rays):
            return None
        return F

    @cached_property
    def faces(self) -> list:
        """All faces, from ``{0}`` to the cone itself, sorted by dimension."""
        start = self._face_from_rays(())
        seen = {start.rays: start}
        todo = [start]
        while todo:
            F = todo.pop()
            for k in range(len(self.rays)):
                if k in F.rays:
                    continue
                G = self._face_from_rays(F.rays | {k})
                if G.rays not in seen:
                    seen[G.rays] = G
                    todo.append(G)
        return sorted(seen.values(), key=lambda F: (F.dim, sorted(F.rays)))

    def face_vectors(self, F: Face):
        return [self.rays[k] for k in sorted(F.rays)]

    def to_json(self):
        return {"generators": [list(g) for g in self.generators], "facets": [list(f) for f in self.facets]}


def cone_from_generators(vectors, ambient_dim: int | None = None) -> Cone:
    """Cone generated by integer vectors; must be pointed and full-dimensional."""
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise ConeError("ambient dimension needed for an empty generator list")
        ambient_dim = len(vectors[0])
    for v in vectors:
        if len(v) != ambient_dim:
            raise ConeError(f"generator {v} does not have length {ambient_dim}")
    nonzero = [v for v in vectors if any(v)]
    if ambient_dim == 0:
        return Cone(vectors, 0, [], [])
    r = rational_rank(nonzero)
    piv = _pivot_columns(nonzero, ambient_dim) if r else []
    if r:
        proj = [tuple(v[i] for i in piv) for v in nonzero]
        dual_rays = extreme_rays(proj)
        if rational_rank(dual_rays) < r:
            raise NotPointedError(f"cone generated by {nonzero} contains a line")
    if r < ambient_dim:
        raise NotFullDimensionalError(f"generators span a {r}-dimensional subspace of R^{ambient_dim}")
    facets = dual_rays
    rays = []
    for v in nonzero:
        p = primitive(v)
        if p in rays:
            continue
        tight = [f for f in facets if dot(f, p) == 0]
        if rational_rank(tight) == ambient_dim - 1:
            rays.append(p)
    return Cone(vectors, ambient_dim, facets, rays)


def cone_from_facets(normals, ambient_dim: int) -> Cone:
    """Cone ``{x : n.x >= 0}``; the inequalities must cut out a pointed full-dimensional cone."""
    normals = [tuple(int(x) for x in n) for n in normals]
    rays = extreme_rays(normals)
    return cone_from_generators(rays, ambient_dim)


class _Hull:
    """Membership in the cone spanned by arbitrary vectors (possibly lower-dimensional)."""

    def __init__(self, vectors):
        self.vectors = [tuple(v) for v in vectors if any(v)]
        self.basis = []
        for v in self.vectors:
            if rational_rank(self.basis + [v]) > len(self.basis):
                self.basis.append(v)
        self.coords = _Coordinates(self.basis)
        self.den = 1
        if self.basis:
            coords = [self.coords(v) for v in self.vectors]
            den = 1
            for c in coords:
                for x in c:
                    den = den * x.denominator // math.gcd(den, x.denominator)
            self.cone = cone_from_generators([[int(x * den) for x in c] for c in coords], len(self.basis))
            self.den = den

    def contains_vector(self, v) -> bool:
        if not self.basis:
            return not any(v)
        c = self.coords(v)
        if c is None:
            return False
        return self.cone.contains([x * self.den for x in c])


def cone_hull(vectors) -> _Hull:
    return _Hull(vectors)


def membership(v, C: Cone, mode: str = "cone", lattice: "LatticeBasis | None" = None) -> bool:
    """Test ``v`` against the cone (``"cone"``), its relative interior (``"relint"``) or a lattice (``"lattice"``)."""
    v = tuple(v)
    if mode == "cone":
        return C.contains(v)
    if mode in ("relint", "relative-interior"):
        return C.in_relint(v)
    if mode == "lattice":
        if lattice is None:
            raise ValueError("lattice mode needs a LatticeBasis")
        return lattice.contains(v)
    raise ValueError(f"unknown membership mode {mode!r}")


# -- lattices ----------------------------------------------------------------

class LatticeBasis:
    """A sublattice of ``Z^d`` stored as the rows of its Hermite normal form."""

    def __init__(self, ambient_dim: int, rows):
        self.ambient_dim = ambient_dim
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)

    @classmethod
    def from_generators(cls, vectors, ambient_dim: int | None = None) -> "LatticeBasis":
        vectors = [tuple(int(x) for x in v) for v in vectors]
        if ambient_dim is None:
            ambient_dim = len(vectors[0])
        nonzero = [v for v in vectors if any(v)]
        if not nonzero or ambient_dim == 0:
            return cls(ambient_dim, [])
        H = hermite_normal_form(Matrix(nonzero).T)
        rows = [tuple(int(H[i, j]) for i in range(H.rows)) for j in range(H.cols)]
        rows = [r for r in rows if any(r)]
        return cls(ambient_dim, rows)

    @classmethod
    def standard(cls, d: int) -> "LatticeBasis":
        return cls(d, [tuple(int(i == j) for j in range(d)) for i in range(d)])

    def __eq__(self, other):
        return isinstance(other, LatticeBasis) and self.ambient_dim == other.ambient_dim and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient_dim, self.rows))

    def __repr__(self):
        return f"LatticeBasis({list(self.rows)})"

    @property
    def rank(self) -> int:
        return len(self.rows)

    @cached_property
    def _coords(self):
        return _Coordinates(self.rows)

    def coordinates(self, v):
        """Rational coordinates of ``v`` in the basis, or ``None`` if outside the rational span."""
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return self._coords(tuple(v))

    def contains(self, v) -> bool:
        c = self.coordinates(tuple(v))
        return c is not None and all(x.denominator == 1 for x in c)

    def saturation(self) -> "LatticeBasis":
        """``span_R(L) cap Z^d``."""
        if not self.rows:
            return self
        _, _, V = smith_normal_decomp(Matrix([list(r) for r in self.rows]))
        Vinv = V.inv()
        gens = [tuple(int(Vinv[i, j]) for j in range(self.ambient_dim)) for i in range(self.rank)]
        return LatticeBasis.from_generators(gens, self.ambient_dim)

    def is_saturated(self) -> bool:
        return self.saturation() == self

    def primitive_on_ray(self, v):
        """Smallest positive multiple of ``v`` lying in the lattice."""
        c = self.coordinates(v)
        if c is None:
            raise ValueError(f"{tuple(v)} is not in the span of the lattice")
        p = primitive(c)
        return tuple(sum(p[i] * self.rows[i][j] for i in range(self.rank)) for j in range(self.ambient_dim))

    def to_json(self):
        return [list(r) for r in self.rows]


# -- semigroups --------------------------------------------------------------

def _zonotope_box(gens, d):
    lo = [sum(min(0, g[i]) for g in gens) for i in range(d)]
    hi = [sum(max(0, g[i]) for g in gens) for i in range(d)]
    return lo, hi


def _box_points(lo, hi, cap):
    total = 1
    for a, b in zip(lo, hi):
        total *= b - a + 1
    if total > cap:
        raise EnumerationCapError(f"bounding box has {total} lattice points, cap is {cap}")
    return itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])


class SemigroupMembership:
    """Decides ``v in N·gens`` for generators of a pointed cone, memoized."""

    def __init__(self, gens):
        self.gens = [tuple(g) for g in gens if any(g)]
        hull = cone_hull(self.gens) if self.gens else None
        if self.gens:
            self._coords = hull.coords
            self._w = [sum(col) for col in zip(*hull.cone.facets)]
        self._memo = {}

    def __contains__(self, v) -> bool:
        v = tuple(v)
        if not any(v):
            return True
        if not self.gens:
            return False
        if v in self._memo:
            return self._memo[v]
        self._memo[v] = False
        c = self._coords(v)
        ok = False
        if c is not None and sum(a * b for a, b in zip(self._w, c)) > 0:
            for g in self.gens:
                rest = tuple(a - b for a, b in zip(v, g))
                if rest in self:
                    ok = True
                    break
        self._memo[v] = ok
        return ok


@dataclass(frozen=True)
class NormalityResult:
    normal: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.normal


def normality_check(gens, L: LatticeBasis | None = None, dim_limit: int = 6,
                    cap: int = 200_000) -> NormalityResult:
    """Is ``N·gens == cone(gens) cap L``?  ``L`` defaults to the lattice generated by ``gens``.

    Every element of ``cone cap L`` is a lattice point of the generators'
    zonotope plus an ``N``-combination of generators, so scanning the
    zonotope's bounding box decides the question.
    """
    gens = tuple(tuple(int(x) for x in g) for g in gens)
    key = (gens, L, dim_limit, cap)
    if key not in _normality_memo:
        _normality_memo[key] = _normality_check(list(gens), L, dim_limit, cap)
    return _normality_memo[key]


_normality_memo: dict = {}


def _normality_check(gens, L, dim_limit, cap) -> NormalityResult:
    d = len(gens[0])
    if d > dim_limit:
        raise EnumerationCapError(f"ambient dimension {d} exceeds the limit {dim_limit}")
    nonzero = [g for g in gens if any(g)]
    if not nonzero:
        return NormalityResult(True)
    L = L or LatticeBasis.from_generators(nonzero, d)
    hull = cone_hull(nonzero)
    semigroup = SemigroupMembership(nonzero)
    lo, hi = _zonotope_box(nonzero, d)
    witnesses = []
    for p in _box_points(lo, hi, cap):
        if not any(p) or not hull.contains_vector(p) or not L.contains(p):
            continue
        if p not in semigroup:
            witnesses.append(p)
    if witnesses:
        best = min(witnesses, key=lambda p: (sum(abs(x) for x in p), p))
        return NormalityResult(False, best)
    return NormalityResult(True)


def hilbert_basis(C: Cone, L: LatticeBasis | None = None, cap: int = 200_000) -> list:
    """Minimal generators of the normal semigroup ``C cap L`` (``L`` defaults to ``Z^d``)."""
    d = C.ambient_dim
    if d == 0:
        return []
    L = L or LatticeBasis.standard(d)
    rays = [L.primitive_on_ray(r) for r in C.rays]
    lo, hi = _zonotope_box(rays, d)
    cands = [p for p in _box_points(lo, hi, cap) if any(p) and C.contains(p) and L.contains(p)]
    cands.sort(key=lambda p: (sum(dot(f, p) for f in C.facets), p))
    basis = []
    for x in cands:
        reducible = False
        for y in basis:
            z = tuple(a - b for a, b in zip(x, y))
            if any(z) and C.contains(z) and L.contains(z):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return sorted(basis)


def localized_membership(v, C: Cone, face, L: LatticeBasis) -> bool:
    """``v in L`` and ``v in C + span(face)``; ``face`` is a :class:`Face` of ``C`` or a list of vectors spanning one."""
    if not isinstance(face, Face):
        F = C.face_spanned_by(face) if face else C._face_from_rays(())
        if F is None:
            raise ConeError("the given vectors do not span a face of the cone")
        face = F
    if not L.contains(v):
        return False
    return all(dot(C.facets[i], v) >= 0 for i in face.facets)
