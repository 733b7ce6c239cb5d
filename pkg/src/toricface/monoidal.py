"""Monoidal complexes: affine semigroups glued along a cell complex, and their degree arena.

Each nonempty cell ``s`` carries a pointed full-dimensional cone ``C_s`` in
``R^{dim s + 1}`` with integer semigroup generators ``G_s``; each covering
pair ``(s, t)`` carries an injective integer matrix mapping the cone of
``t`` onto a face of the cone of ``s``.  Degrees of the toric face ring are
stored canonically as ``(cell, vector)`` with the vector in the relative
interior of the cell's cone.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import cached_property

from sympy import Matrix

from .cells import EMPTY, CellComplex, Diagnostic, validate_complex
from .polyhedral import (
    ConeError,
    EnumerationCapError,
    LatticeBasis,
    SemigroupMembership,
    _Coordinates,
    cone_from_generators,
    dot,
    extreme_rays,
    hilbert_basis,
    normality_check,
    primitive,
    rational_rank,
)

DEFAULT_ENUM_CAP = 200_000


def enumeration_cap() -> int:
    return int(os.environ.get("TFR_ENUM_CAP", DEFAULT_ENUM_CAP))


class MonoidalError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{d.kind}: {d.message}" for d in self.diagnostics))


def apply(M, v):
    """Integer matrix (list of rows) times vector."""
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def compose(A, B, rows_a: int, cols_b: int):
    inner = len(B)
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols_b)] for i in range(rows_a)]


def columns(M, ncols: int):
    return [tuple(row[j] for row in M) for j in range(ncols)]


@dataclass(frozen=True, order=True)
class Degree:
    """An element of the degree arena: a support cell and a vector in that cell's coordinates."""

    cell: str
    vector: tuple

    def __repr__(self):
        return f"Degree({self.cell!r}, {self.vector})"


class MonoidalComplex:
    """A validated monoidal complex; construct through :func:`validate_monoidal` or an importer."""

    def __init__(self, K: CellComplex, cones, generators, gluings, embeds, normal, labels=None,
                 ambient=None, verdicts=None):
        self.K = K
        self.cones = cones
        self.generators = generators
        self.gluings = gluings
        self._embeds = embeds
        self.normal = normal
        self.labels = labels or {}
        self.ambient = ambient
        self.verdicts = verdicts or {}
        self.lattices = {s: LatticeBasis.from_generators(generators[s], self.d(s)) if self.d(s) else
                         LatticeBasis(0, []) for s in K.cells}
        self._pull_cache = {}
        self.face_cell = {}
        for s in K.cells:
            for t in K.below(s):
                F = self.face_of(s, t)
                self.face_cell[(s, F.rays)] = t

    def __repr__(self):
        return f"MonoidalComplex({self.K!r})"

    def d(self, s) -> int:
        return self.K.dims[s] + 1

    @property
    def dimension(self) -> int:
        return self.K.dimension

    @property
    def cone_wise_normal(self) -> bool:
        return all(self.normal.values())

    def embed(self, s, t):
        """Matrix of the composite gluing from ``t`` into ``s`` (``t <= s``), as a list of rows."""
        return self._embeds[(s, t)]

    def push(self, s, t, v):
        return apply(self.embed(s, t), v) if self.d(t) else tuple(0 for _ in range(self.d(s)))

    def pull(self, s, t, v):
        """Preimage of ``v`` under the gluing ``t -> s`` if it is an integer vector, else ``None``."""
        if self.d(t) == 0:
            return () if not any(v) else None
        key = (s, t)
        if key not in self._pull_cache:
            self._pull_cache[key] = _Coordinates(columns(self.embed(s, t), self.d(t)))
        x = self._pull_cache[key](tuple(v))
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)

    def face_of(self, s, t):
        """The face of ``C_s`` that is the image of ``C_t``."""
        cone = self.cones[s]
        if self.d(t) == 0:
            return cone._face_from_rays(())
        imgs = [self.push(s, t, r) for r in self.cones[t].rays]
        return cone._face_from_rays(k for k, r in enumerate(cone.rays) if primitive(r) in
                                    {primitive(x) for x in imgs})

    # -- degrees -------------------------------------------------------------
    def supp(self, cell, vector) -> Degree:
        """Canonical degree of ``vector`` given in the coordinates of ``cell``."""
        vector = tuple(int(x) for x in vector)
        if len(vector) != self.d(cell):
            raise ValueError(f"vector of length {len(vector)} for cell {cell!r} of coordinate dimension {self.d(cell)}")
        cone = self.cones[cell]
        if not cone.contains(vector):
            raise ValueError(f"{vector} is not in the cone of cell {cell!r}")
        F = cone.face_of_point(vector) if self.d(cell) else cone._face_from_rays(())
        t = self.face_cell[(cell, F.rays)]
        w = self.pull(cell, t, vector)
        if w is None:
            raise ValueError(f"{vector} is not in the lattice of cell {cell!r}")
        return Degree(t, w)

    def zero(self) -> Degree:
        return Degree(self.K.bottom, ())

    def in_semigroup(self, cell, vector) -> bool:
        return tuple(vector) in self._semigroup(cell)

    def _semigroup(self, cell):
        key = ("sg", cell)
        if key not in self._pull_cache:
            self._pull_cache[key] = SemigroupMembership(self.generators[cell])
        return self._pull_cache[key]

    def add_degrees(self, a: Degree, b: Degree) -> Degree | None:
        """``a + b`` in the degree arena, or ``None`` when no cell contains both."""
        s = self.K.join(a.cell, b.cell)
        if s is None:
            return None
        v = tuple(x + y for x, y in zip(self.push(s, a.cell, a.vector), self.push(s, b.cell, b.vector)))
        return self.supp(s, v)

    def minimal_cells(self, cell, vector):
        """Minimal cells ``t <= cell`` whose lattice, glued into ``cell``, contains ``vector``."""
        cands = [t for t in self.K.below(cell) if self._in_glued_lattice(cell, t, vector)]
        return [t for t in cands if not any(o != t and self.K.leq(o, t) for o in cands)]

    def _in_glued_lattice(self, s, t, v):
        if self.d(t) == 0:
            return not any(v)
        w = self.pull(s, t, v)
        return w is not None and self.lattices[t].contains(w)

    def degree_class(self, cell, vector):
        """All minimal-cell representatives of the group element ``vector`` of ``ZM_cell``."""
        return sorted(Degree(t, self.pull(cell, t, vector)) for t in self.minimal_cells(cell, vector))

    def lattice_degree(self, cell, vector) -> Degree:
        """Canonical representative of an element of the lattice arena given in ``cell`` coordinates."""
        reps = self.degree_class(cell, tuple(vector))
        return min(reps, key=lambda d: (self.K.index[d.cell], d.vector))

    def subtract_degrees(self, a: Degree, b: Degree) -> Degree | None:
        s = self.K.join(a.cell, b.cell)
        if s is None:
            return None
        v = tuple(x - y for x, y in zip(self.push(s, a.cell, a.vector), self.push(s, b.cell, b.vector)))
        return self.lattice_degree(s, v)

    def negate(self, a: Degree) -> Degree:
        return Degree(a.cell, tuple(-x for x in a.vector))

    def is_nonneg(self, a: Degree) -> bool:
        """Is the lattice degree ``a`` an element of the semigroup arena (canonical form)?"""
        return self.cones[a.cell].in_relint(a.vector) and self.lattices[a.cell].contains(a.vector) \
            if self.d(a.cell) else True

    @cached_property
    def generator_degrees(self):
        """Canonical degrees of all semigroup generators, deduplicated, in a stable order."""
        out = []
        for s in self.K.nonempty_cells:
            for g in self.generators[s]:
                if any(g):
                    dg = self.supp(s, g)
                    if dg not in out:
                        out.append(dg)
        return out

    def interior_point(self, s) -> Degree:
        """The fixed interior point ``c(s)``: sum of the interior generators, else of all generators."""
        if self.d(s) == 0:
            return self.zero()
        cone = self.cones[s]
        inner = [g for g in self.generators[s] if cone.in_relint(g)]
        use = inner or self.generators[s]
        v = tuple(sum(col) for col in zip(*use))
        return self.supp(s, v)

    def ambient_vector(self, a: Degree):
        if self.ambient is None:
            raise ValueError("complex has no ambient realization")
        return apply(self.ambient[a.cell], a.vector) if self.d(a.cell) else tuple(
            0 for _ in range(self.ambient_dim))

    @property
    def ambient_dim(self):
        return len(next(iter(self.ambient.values()))) if self.ambient else None

    def enumerate_degrees(self, bound: int, cap: int | None = None) -> dict:
        """Degrees that are sums of at most ``bound`` generators, mapped to the least such number."""
        cap = cap or enumeration_cap()
        best = {self.zero(): 0}
        frontier = [self.zero()]
        gens = self.generator_degrees
        for k in range(1, bound + 1):
            nxt = []
            for a in frontier:
                for g in gens:
                    c = self.add_degrees(a, g)
                    if c is not None and c not in best:
                        best[c] = k
                        nxt.append(c)
                        if len(best) > cap:
                            raise EnumerationCapError(f"more than {cap} degrees at bound {bound}")
            frontier = nxt
        return best

    def label(self, s) -> str:
        return self.labels.get(s, s)

    def format_degree(self, a: Degree) -> str:
        return f"{a.cell}:{list(a.vector)}"

    def to_json(self):
        data = {"cells": {}, "gluings": []}
        for s in self.K.nonempty_cells:
            entry = {"generators": [list(g) for g in self.generators[s]]}
            if [tuple(g) for g in self.cones[s].generators] != [tuple(g) for g in self.generators[s]]:
                entry["cone"] = [list(g) for g in self.cones[s].generators]
            data["cells"][s] = entry
        for hi, lo in self.K.coverings:
            if lo == self.K.bottom:
                continue
            data["gluings"].append({"upper": hi, "lower": lo, "matrix": [list(r) for r in self.gluings[(hi, lo)]]})
        return data


# -- validation --------------------------------------------------------------

def validate_monoidal(K: CellComplex, cells: dict, gluings: dict, labels=None, ambient=None,
                      require_normal: bool = False) -> MonoidalComplex:
    """Check every monoidal-complex axiom; raise :class:`MonoidalError` listing all failures.

    ``cells[s]`` holds ``{"generators": [...], "cone": [...] (optional)}``;
    ``gluings[(s, t)]`` holds the integer matrix of a covering pair.
    """
    diags = []
    verdicts = {s: [] for s in K.cells}

    def fail(kind, msg, cs):
        diags.append(Diagnostic(kind, msg, tuple(cs)))
        for c in cs:
            if c in verdicts:
                verdicts[c].append(kind)

    cones, gens = {}, {}
    bottom = K.bottom
    cones[bottom] = cone_from_generators([], 0)
    gens[bottom] = []
    for s in K.nonempty_cells:
        d = K.dims[s] + 1
        entry = cells.get(s)
        if entry is None:
            fail("cone", f"cell {s!r} has no semigroup data", [s])
            continue
        G = [tuple(int(x) for x in g) for g in entry["generators"]]
        bad = [g for g in G if len(g) != d]
        if bad:
            fail("cone", f"cell {s!r} needs generators of length {d}, got {bad}", [s])
            continue
        try:
            C = cone_from_generators(entry.get("cone") or G, d)
        except ConeError as exc:
            fail("cone", f"cell {s!r}: {exc}", [s])
            continue
        if entry.get("cone"):
            try:
                CG = cone_from_generators(G, d)
                if sorted(CG.rays) != sorted(C.rays):
                    raise ConeError("different rays")
            except ConeError:
                fail("cone-mismatch", f"semigroup generators of {s!r} do not span its cone", [s])
                continue
        cones[s], gens[s] = C, G
    if diags:
        raise MonoidalError(diags)

    glue = {}
    for hi, lo in K.coverings:
        if lo == bottom:
            glue[(hi, lo)] = [[] for _ in range(K.dims[hi] + 1)]
            continue
        M = gluings.get((hi, lo))
        dh, dl = K.dims[hi] + 1, K.dims[lo] + 1
        if M is None:
            fail("gluing-missing", f"no gluing matrix for covering ({hi!r}, {lo!r})", [hi, lo])
            continue
        M = [[int(x) for x in r] for r in M]
        if len(M) != dh or any(len(r) != dl for r in M):
            fail("gluing-shape", f"gluing ({hi!r}, {lo!r}) must be {dh}x{dl}", [hi, lo])
            continue
        if rational_rank(M) != dl:
            fail("gluing-not-injective", f"gluing ({hi!r}, {lo!r}) is not injective", [hi, lo])
            continue
        glue[(hi, lo)] = M
    if diags:
        raise MonoidalError(diags)

    # composite gluings, checked for path independence
    embeds = {}
    for s in K.cells:
        d = K.dims[s] + 1
        embeds[(s, s)] = [[int(i == j) for j in range(d)] for i in range(d)]
        for t in K.down[s]:
            for u in K.below(t):
                M = compose(glue[(s, t)], embeds[(t, u)], d, K.dims[u] + 1)
                old = embeds.get((s, u))
                if old is None:
                    embeds[(s, u)] = M
                elif old != M:
                    fail("compatibility", f"composite gluings from {u!r} to {s!r} disagree (via {t!r})", [s, u])
    if diags:
        raise MonoidalError(diags)

    # face correspondence
    for s in K.nonempty_cells:
        C = cones[s]
        seen = {}
        for t in K.below(s):
            imgs = [apply(embeds[(s, t)], r) for r in cones[t].rays]
            F = C.face_spanned_by(imgs) if imgs else C._face_from_rays(())
            if F is None:
                fail("face-correspondence", f"image of the cone of {t!r} is not a face of the cone of {s!r}", [s, t])
                continue
            if F.rays in seen:
                fail("face-correspondence", f"cells {seen[F.rays]!r} and {t!r} map to the same face of {s!r}",
                     [s, t, seen[F.rays]])
            seen[F.rays] = t
        if len(seen) != len(C.faces) and not any(d.kind == "face-correspondence" for d in diags):
            fail("face-correspondence", f"cone of {s!r} has {len(C.faces)} faces but {len(seen)} cells lie below it",
                 [s])
    if diags:
        raise MonoidalError(diags)

    # semigroup restriction: M_s cap face = N(G_s cap face) must equal the glued image of M_t
    for hi, lo in K.coverings:
        if lo == bottom:
            continue
        C = cones[hi]
        M = glue[(hi, lo)]
        img_gens = [apply(M, g) for g in gens[lo]]
        tight = [f for f in C.facets if all(dot(f, x) == 0 for x in img_gens)]
        face_gens = [g for g in gens[hi] if all(dot(f, g) == 0 for f in tight)]
        sg_hi = SemigroupMembership(face_gens)
        sg_lo = SemigroupMembership(gens[lo])
        pull = _Coordinates(columns(M, K.dims[lo] + 1))
        for x, g in zip(img_gens, gens[lo]):
            if x not in sg_hi:
                fail("semigroup-restriction", f"glued generator {g} of {lo!r} is not in the semigroup of {hi!r}",
                     [hi, lo])
        for g in face_gens:
            w = pull(g)
            if w is None or any(c.denominator != 1 for c in w) or tuple(int(c) for c in w) not in sg_lo:
                fail("semigroup-restriction",
                     f"generator {g} of {hi!r} on the face of {lo!r} does not come from the semigroup of {lo!r}",
                     [hi, lo])
    if diags:
        raise MonoidalError(diags)

    normal = {bottom: True}
    for s in K.nonempty_cells:
        res = normality_check(gens[s], cap=enumeration_cap())
        normal[s] = res.normal
        if not res.normal:
            verdicts[s].append("not-normal")
            if require_normal:
                fail("not-normal", f"semigroup of {s!r} is not normal, missing {res.witness}", [s])
    for a, b in itertools.combinations(K.cells, 2):
        try:
            K.join(a, b)
        except ValueError:
            fail("join-not-unique", f"cells {a!r} and {b!r} have several minimal common upper cells", [a, b])
    if diags:
        raise MonoidalError(diags)
    verdicts = {s: (v or ["ok"]) for s, v in verdicts.items()}
    return MonoidalComplex(K, cones, gens, glue, embeds, normal, labels=labels, ambient=ambient, verdicts=verdicts)


# -- importers ---------------------------------------------------------------

def _vertex_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def simplex_id(vertices) -> str:
    vs = sorted(vertices, key=_vertex_key)
    return ",".join(str(v) for v in vs) if vs else EMPTY


def import_simplicial(facets) -> MonoidalComplex:
    """Stanley-Reisner case: coordinate cones and unit-vector semigroups on every face."""
    faces = set()
    for F in facets:
        F = tuple(sorted(set(F), key=_vertex_key))
        for k in range(len(F) + 1):
            for sub in itertools.combinations(F, k):
                faces.add(sub)
    faces = sorted(faces, key=lambda f: (len(f), [_vertex_key(v) for v in f]))
    dims = {simplex_id(f): len(f) - 1 for f in faces}
    coverings = []
    cells, gluings = {}, {}
    for f in faces:
        fid = simplex_id(f)
        n = len(f)
        if n:
            cells[fid] = {"generators": [tuple(int(i == j) for j in range(n)) for i in range(n)]}
        for i in range(n):
            g = f[:i] + f[i + 1:]
            gid = simplex_id(g)
            coverings.append((fid, gid))
            if g:
                # coordinate inclusion: vertex j of g goes to its slot in f
                gluings[(fid, gid)] = [[int(f[r] == g[c]) for c in range(len(g))] for r in range(n)]
    K = validate_complex(dims, coverings)
    labels = {simplex_id((v,)): str(v) for f in faces if len(f) == 1 for v in f}
    return validate_monoidal(K, cells, gluings, labels=labels)


def from_vertex_rays(K: CellComplex, rays: dict, labels=None) -> MonoidalComplex:
    """Polytopal builder: each cell lists an integer ray in ``R^{dim+1}`` per vertex.

    Vertices default to ``(1,)`` and edges to ``e1, e2`` in the order their
    vertices appear in the cell complex.  Semigroups are the normal ones
    ``C cap Z^d``; gluings are solved from the vertex correspondence.
    """
    vr = {}
    for s in K.nonempty_cells:
        verts = [v for v in K.sorted_cells(K.below(s)) if K.dims[v] == 0]
        if s in rays:
            vr[s] = {v: tuple(rays[s][v]) for v in verts}
        elif K.dims[s] == 0:
            vr[s] = {s: (1,)}
        elif K.dims[s] == 1:
            vr[s] = {verts[0]: (1, 0), verts[1]: (0, 1)}
        else:
            raise ValueError(f"cell {s!r} needs explicit vertex rays")
    cells, gluings = {}, {}
    for s in K.nonempty_cells:
        d = K.dims[s] + 1
        C = cone_from_generators(list(vr[s].values()), d)
        cells[s] = {"generators": hilbert_basis(C, cap=enumeration_cap())}
        for t in K.down[s]:
            if t == K.bottom:
                continue
            dt = K.dims[t] + 1
            src = [vr[t][v] for v in vr[t]]
            dst = [vr[s][v] for v in vr[t]]
            # solve M * src_j = dst_j for the d x dt matrix M on an independent subset
            basis = _span_basis(src)
            Sb = Matrix([list(x) for x in basis]).T
            Db = Matrix([list(dst[src.index(x)]) for x in basis]).T
            M = Db * Sb.inv()
            if any(not x.is_integer for x in M) or any(
                    tuple(M * Matrix(list(x))) != tuple(y) for x, y in zip(src, dst)):
                raise ValueError(f"vertex rays of {t!r} and {s!r} are not related by an integer linear map")
            gluings[(s, t)] = [[int(M[i, j]) for j in range(dt)] for i in range(d)]
    return validate_monoidal(K, cells, gluings, labels=labels)


def _span_basis(vectors):
    basis = []
    for v in vectors:
        if rational_rank(basis + [v]) > len(basis):
            basis.append(tuple(v))
    return basis


def _span_intersection(B1, B2, n):
    if not B1 or not B2:
        return []
    A = Matrix([list(b) for b in B1]).T.row_join(-Matrix([list(b) for b in B2]).T)
    out = []
    for z in A.nullspace():
        x = [sum(z[i] * B1[i][k] for i in range(len(B1))) for k in range(n)]
        out.append(primitive(x))
    return _span_basis(out)


def import_fan(ambient_dim: int, cones) -> MonoidalComplex:
    """Monoidal complex of a rational pointed fan with ``M_s = C_s cap Z^n``.

    ``cones`` lists generator sets in ``Z^n``; all faces of every listed cone
    become cells.  Raises :class:`MonoidalError` with kind ``not-a-fan`` when
    two cones do not meet in a common face.
    """
    n = ambient_dim
    ray_ids = {}
    data = []
    for gens in cones:
        gens = [tuple(int(x) for x in g) for g in gens]
        basis = _span_basis(gens)
        coords = _Coordinates(basis)
        local = [coords(g) for g in gens]
        den = 1
        for c in local:
            for x in c:
                den = den * x.denominator // math.gcd(den, x.denominator)
        try:
            C = cone_from_generators([[int(x * den) for x in c] for c in local], len(basis))
        except ConeError as exc:
            raise MonoidalError([Diagnostic("cone", f"cone {gens}: {exc}", ())]) from exc
        amb_rays = [primitive([sum(x * b[k] for x, b in zip(r, basis)) for k in range(n)]) for r in C.rays]
        for r in amb_rays:
            ray_ids.setdefault(r, len(ray_ids))
        data.append((gens, basis, coords, den, C, amb_rays))

    # fan condition: pairwise intersections are common faces
    for (i, a), (j, b) in itertools.combinations(enumerate(data), 2):
        W = _span_intersection(a[1], b[1], n)
        inter_rays = []
        if W:
            rows = []
            for (_, basis, coords, den, C, _) in (a, b):
                for f in C.facets:
                    # f . (den * coords(sum y_k W_k)) >= 0, linear in y
                    rows.append([dot(f, coords(w)) * den for w in W])
            dd = 1
            for r in rows:
                for x in r:
                    dd = dd * x.denominator // math.gcd(dd, x.denominator)
            rows = [[int(x * dd) for x in r] for r in rows]
            ys = extreme_rays(rows) if rows and rational_rank(rows) == len(W) else None
            if ys is None:
                raise MonoidalError([Diagnostic("not-a-fan", f"cones {i} and {j} meet in a set containing a line",
                                                (str(i), str(j)))])
            inter_rays = [primitive([sum(y[k] * W[k][m] for k in range(len(W))) for m in range(n)]) for y in ys]
        for idx, (gens, basis, coords, den, C, amb_rays) in ((i, a), (j, b)):
            local = [[x * den for x in coords(r)] for r in inter_rays]
            F = C.face_spanned_by([primitive(v) for v in local]) if local else C._face_from_rays(())
            if F is None:
                raise MonoidalError([Diagnostic(
                    "not-a-fan", f"cones {i} and {j} intersect in {inter_rays}, which is not a face of cone {idx}",
                    (str(i), str(j)))])

    def face_id(rayset):
        return "+".join(f"r{k}" for k in sorted(ray_ids[r] for r in rayset)) or EMPTY

    cells = {}
    coverings = set()
    for (gens, basis, coords, den, C, amb_rays) in data:
        faces = C.faces
        for F in faces:
            rs = frozenset(amb_rays[k] for k in F.rays)
            cells[face_id(rs)] = (F.dim - 1, rs)
        for F in faces:
            for G in faces:
                if G.dim == F.dim - 1 and G.rays <= F.rays:
                    coverings.add((face_id(frozenset(amb_rays[k] for k in F.rays)),
                                   face_id(frozenset(amb_rays[k] for k in G.rays))))
    order = sorted(cells, key=lambda c: (cells[c][0], sorted(ray_ids[r] for r in cells[c][1])))
    dims = {c: cells[c][0] for c in order}
    K = validate_complex(dims, sorted(coverings))

    # per-cell coordinates: a basis of span(C) cap Z^n
    bases, cell_data, amb = {}, {}, {}
    for c in order:
        if c == EMPTY:
            continue
        rs = sorted(cells[c][1], key=ray_ids.__getitem__)
        L = LatticeBasis.from_generators(rs, n).saturation()
        bases[c] = _Coordinates(L.rows)
        amb[c] = [list(col) for col in zip(*L.rows)]  # n x d matrix
        local = [tuple(int(x) for x in bases[c](r)) for r in rs]
        C = cone_from_generators(local, len(L.rows))
        cell_data[c] = {"generators": hilbert_basis(C, cap=enumeration_cap())}
    gluings = {}
    for hi, lo in K.coverings:
        if lo == K.bottom:
            continue
        cols = [tuple(int(x) for x in bases[hi](tuple(row[j] for row in amb[lo]))) for j in range(len(amb[lo][0]))]
        gluings[(hi, lo)] = [[col[i] for col in cols] for i in range(K.dims[hi] + 1)]
    amb[EMPTY] = [[] for _ in range(n)]
    return validate_monoidal(K, cell_data, gluings, ambient=amb)
