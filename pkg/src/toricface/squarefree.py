"""Squarefree modules as representations of the face poset, the Ishida complex, and the duality functor.

A squarefree module assigns a vector space to every cell (the empty cell
included) and a linear map to every covering pair ``(upper, lower)``, going
from the lower cell's space to the upper cell's space.  Its graded piece in a
degree ``a`` of the toric face ring is the space at ``supp(a)``.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .cells import CellComplex, IncidenceFunction
from .linalg import (
    Field,
    assemble,
    column_basis,
    extend_basis,
    hstack,
    kernel_basis,
    rank,
    solve_columns,
)



@dataclass
class FunctorialityAudit:
    """Running tally over every module built in this process."""

    constructed: int = 0     # modules successfully built
    verified: int = 0        # of those, modules whose diamonds were all checked
    failures: int = 0        # modules built unchecked and later found not to commute
    rejected: int = 0        # constructions refused because a diamond failed
    equations: int = 0       # diamond equations evaluated


AUDIT = FunctorialityAudit()


class SquarefreeError(ValueError):
    pass


class SquarefreeModule:
    """Cell-indexed vector spaces with transition maps on covering pairs.

    Every commuting square is verified on construction unless ``check=False``.
    """

    def __init__(self, K: CellComplex, field: Field, dims: dict, transitions: dict, check: bool = True):
        self.K = K
        self.field = field
        self.dims = {c: int(dims.get(c, 0)) for c in K.cells}
        self.transitions = {}
        for hi, lo in K.coverings:
            M = transitions.get((hi, lo))
            shape = (self.dims[hi], self.dims[lo])
            if M is None:
                if shape[0] and shape[1]:
                    raise SquarefreeError(f"missing transition for ({hi!r}, {lo!r})")
                M = field.zeros(*shape)
            if M.shape != shape:
                raise SquarefreeError(f"transition ({hi!r}, {lo!r}) has shape {M.shape}, expected {shape}")
            self.transitions[(hi, lo)] = field.convert(M).to_dense()
        self._composite = {}
        self._verified = False
        if check:
            bad = self.functoriality_violations()
            if bad:
                AUDIT.rejected += 1
                raise SquarefreeError(f"transitions do not commute on {bad[:3]}")
            self._verified = True
            AUDIT.verified += 1
        AUDIT.constructed += 1

    def __repr__(self):
        nz = {c: n for c, n in self.dims.items() if n}
        return f"SquarefreeModule({nz})"

    def dim(self, cell) -> int:
        return self.dims[cell]

    def transition(self, upper, lower):
        return self.transitions[(upper, lower)]

    def functoriality_violations(self):
        """Diamonds on which the two composite transitions differ."""
        bad = []
        for top, m1, m2, lo in self.K.diamonds():
            AUDIT.equations += 1
            a = self.transitions[(top, m1)] * self.transitions[(m1, lo)]
            b = self.transitions[(top, m2)] * self.transitions[(m2, lo)]
            if a != b:
                bad.append((top, m1, m2, lo))
        return bad

    def verify(self):
        """Check functoriality of a module built with ``check=False`` and record the outcome."""
        bad = self.functoriality_violations()
        if not self._verified:
            self._verified = True
            AUDIT.verified += 1
            AUDIT.failures += bool(bad)
        return bad

    def phi(self, upper, lower):
        """Composite transition ``M_lower -> M_upper`` for ``lower <= upper``."""
        if upper == lower:
            return self.field.eye(self.dims[upper])
        key = (upper, lower)
        if key not in self._composite:
            if not self.K.leq(lower, upper):
                raise SquarefreeError(f"{lower!r} is not below {upper!r}")
            # step down from upper through any covered cell still above lower
            mid = next(m for m in self.K.down[upper] if self.K.leq(lower, m))
            self._composite[key] = self.transitions[(upper, mid)] * self.phi(mid, lower)
        return self._composite[key]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def restricted_to_nonempty(self) -> "SquarefreeModule":
        dims = dict(self.dims)
        dims[self.K.bottom] = 0
        tr = {p: M for p, M in self.transitions.items() if p[1] != self.K.bottom}
        return SquarefreeModule(self.K, self.field, dims, tr)

    def to_json(self):
        from .linalg import entries
        return {
            "dims": {c: n for c, n in self.dims.items()},
            "transitions": [{"upper": hi, "lower": lo, "matrix": entries(M)}
                            for (hi, lo), M in self.transitions.items() if M.shape[0] and M.shape[1]],
        }


def evaluate_at_degree(M: SquarefreeModule, a) -> int:
    """``dim M_a``: the space at ``supp(a)``."""
    return M.dims[a.cell]


def free_module(K: CellComplex, field: Field) -> SquarefreeModule:
    """The ring itself: ``k`` at every cell, identity transitions."""
    dims = {c: 1 for c in K.cells}
    return SquarefreeModule(K, field, dims, {p: field.eye(1) for p in K.coverings})


def face_module(K: CellComplex, cell, field: Field) -> SquarefreeModule:
    """``k[cell] = R / p_cell``: ``k`` on the cells below ``cell``."""
    below = K.below(cell)
    dims = {c: int(c in below) for c in K.cells}
    tr = {(hi, lo): field.eye(1) for hi, lo in K.coverings if hi in below}
    return SquarefreeModule(K, field, dims, tr)


def zero_module(K: CellComplex, field: Field) -> SquarefreeModule:
    return SquarefreeModule(K, field, {}, {})


def direct_sum(mods) -> SquarefreeModule:
    mods = list(mods)
    K, field = mods[0].K, mods[0].field
    dims = {c: sum(m.dims[c] for m in mods) for c in K.cells}
    tr = {}
    for hi, lo in K.coverings:
        blocks = {(k, k): m.transitions[(hi, lo)] for k, m in enumerate(mods)}
        tr[(hi, lo)] = assemble([m.dims[hi] for m in mods], [m.dims[lo] for m in mods], blocks, field.domain)
    return SquarefreeModule(K, field, dims, tr)


# -- morphisms ---------------------------------------------------------------

@dataclass
class SquarefreeMorphism:
    source: SquarefreeModule
    target: SquarefreeModule
    maps: dict   # cell -> matrix (target dim x source dim)

    def is_natural(self) -> bool:
        for hi, lo in self.source.K.coverings:
            a = self.maps[hi] * self.source.transitions[(hi, lo)]
            b = self.target.transitions[(hi, lo)] * self.maps[lo]
            if a != b:
                return False
        return True

    def image(self) -> SquarefreeModule:
        K = self.source.K
        bases = {c: column_basis(self.maps[c]) for c in K.cells}
        return _submodule(self.target, bases)

    def kernel(self) -> SquarefreeModule:
        K = self.source.K
        bases = {c: kernel_basis(self.maps[c]) for c in K.cells}
        return _submodule(self.source, bases)

    def cokernel(self) -> SquarefreeModule:
        K = self.source.K
        bases = {c: column_basis(self.maps[c]) for c in K.cells}
        return _quotient(self.target, bases)


def _submodule(M: SquarefreeModule, bases) -> SquarefreeModule:
    K, F = M.K, M.field
    dims = {c: bases[c].shape[1] for c in K.cells}
    tr = {}
    for hi, lo in K.coverings:
        img = M.transitions[(hi, lo)] * bases[lo] if bases[lo].shape[1] else F.zeros(M.dims[hi], 0)
        tr[(hi, lo)] = solve_columns(bases[hi], img)
    return SquarefreeModule(K, F, dims, tr)


def _quotient(M: SquarefreeModule, sub_bases) -> SquarefreeModule:
    """``M / N`` with ``N_c`` spanned by the independent columns ``sub_bases[c]``."""
    K, F = M.K, M.field
    reps = {c: extend_basis(sub_bases[c], F.eye(M.dims[c])) for c in K.cells}
    dims = {c: reps[c].shape[1] for c in K.cells}
    tr = {}
    for hi, lo in K.coverings:
        full = hstack([sub_bases[hi], reps[hi]], M.dims[hi], F.domain)
        img = M.transitions[(hi, lo)] * reps[lo] if reps[lo].shape[1] else F.zeros(M.dims[hi], 0)
        coords = solve_columns(full, img) if full.shape[1] else F.zeros(0, img.shape[1])
        k = sub_bases[hi].shape[1]
        tr[(hi, lo)] = coords.extract(list(range(k, full.shape[1])), list(range(img.shape[1]))) \
            if dims[hi] and img.shape[1] else F.zeros(dims[hi], img.shape[1])
    return SquarefreeModule(K, F, dims, tr)


def hom_dimension(M: SquarefreeModule, N: SquarefreeModule) -> int:
    """Dimension of the space of module maps ``M -> N``."""
    K, F = M.K, M.field
    offs, n = {}, 0
    for c in K.cells:
        offs[c] = n
        n += N.dims[c] * M.dims[c]
    rows = []

    def var(c, i, j):  # entry (i, j) of f_c
        return offs[c] + i * M.dims[c] + j

    for hi, lo in K.coverings:
        A, B = M.transitions[(hi, lo)].to_list() if M.dims[hi] and M.dims[lo] else None, \
            N.transitions[(hi, lo)].to_list() if N.dims[hi] and N.dims[lo] else None
        # f_hi * A - B * f_lo = 0, entrywise over N_hi x M_lo
        for i in range(N.dims[hi]):
            for j in range(M.dims[lo]):
                row = {}
                if A is not None:
                    for k in range(M.dims[hi]):
                        if A[k][j]:
                            row[var(hi, i, k)] = row.get(var(hi, i, k), 0) + A[k][j]
                if B is not None:
                    for k in range(N.dims[lo]):
                        if B[i][k]:
                            row[var(lo, k, j)] = row.get(var(lo, k, j), 0) - B[i][k]
                rows.append(row)
    if n == 0:
        return 0
    dense = [[r.get(k, 0) for k in range(n)] for r in rows]
    return n - (rank(F.matrix(dense, (len(dense), n))) if dense else 0)


def random_face_morphism(K: CellComplex, field: Field, rng: _random.Random, n_source: int = 2,
                         n_target: int = 2) -> SquarefreeMorphism:
    """Random map between sums of face modules; components ``k[s] -> k[t]`` are scalars when ``t <= s``."""
    cells = list(K.cells)
    src = [rng.choice(cells) for _ in range(n_source)]
    tgt = [rng.choice(cells) for _ in range(n_target)]
    S = direct_sum([face_module(K, c, field) for c in src])
    T = direct_sum([face_module(K, c, field) for c in tgt])
    scal = [[rng.choice([-1, 0, 1, 2]) if K.leq(t, s) else 0 for s in src] for t in tgt]
    maps = {}
    for c in K.cells:
        rows = [k for k, t in enumerate(tgt) if K.leq(c, t)]
        cols = [k for k, s in enumerate(src) if K.leq(c, s)]
        maps[c] = field.matrix([[scal[r][q] for q in cols] for r in rows], (len(rows), len(cols)))
    f = SquarefreeMorphism(S, T, maps)
    if not f.is_natural():
        raise SquarefreeError("random face morphism is not natural")
    return f


def random_squarefree_module(K: CellComplex, field: Field, rng: _random.Random, max_dim: int = 2):
    """Image of a random morphism between sums of face modules; every space has dimension ``<= max_dim``."""
    return random_face_morphism(K, field, rng, n_source=rng.randint(1, 3), n_target=max_dim).image()


# -- complexes ---------------------------------------------------------------

class SqComplex:
    """Bounded cochain complex of squarefree modules.

    ``terms[i]`` is a module and ``diffs[i][c]`` the matrix of
    ``terms[i]_c -> terms[i+1]_c``.
    """

    def __init__(self, K: CellComplex, field: Field, terms: dict, diffs: dict, check: bool = True):
        self.K, self.field = K, field
        self.terms = dict(sorted(terms.items()))
        self.diffs = {}
        for i in self.terms:
            if i + 1 not in self.terms:
                continue
            src, tgt = self.terms[i], self.terms[i + 1]
            self.diffs[i] = {}
            for c in K.cells:
                M = diffs.get(i, {}).get(c)
                shape = (tgt.dims[c], src.dims[c])
                if M is None:
                    M = field.zeros(*shape)
                if M.shape != shape:
                    raise SquarefreeError(f"differential {i} at {c!r} has shape {M.shape}, expected {shape}")
                self.diffs[i][c] = field.convert(M).to_dense()
        if check:
            problems = self.violations()
            if problems:
                raise SquarefreeError(f"not a complex of squarefree modules: {problems[:3]}")

    def __repr__(self):
        return f"SqComplex(indices {list(self.terms)})"

    def indices(self):
        return list(self.terms)

    def d(self, i, c):
        if i in self.diffs:
            return self.diffs[i][c]
        src = self.terms.get(i)
        tgt = self.terms.get(i + 1)
        return self.field.zeros(tgt.dims[c] if tgt else 0, src.dims[c] if src else 0)

    def violations(self):
        out = []
        for i in self.diffs:
            if i + 1 in self.diffs:
                for c in self.K.cells:
                    a, b = self.diffs[i][c], self.diffs[i + 1][c]
                    if a.shape[1] and b.shape[0] and a.shape[0] and not (b * a).is_zero_matrix:
                        out.append(("d^2", i, c))
            src, tgt = self.terms[i], self.terms[i + 1]
            for hi, lo in self.K.coverings:
                lhs = self.diffs[i][hi] * src.transitions[(hi, lo)]
                rhs = tgt.transitions[(hi, lo)] * self.diffs[i][lo]
                if lhs != rhs:
                    out.append(("naturality", i, hi, lo))
        return out

    def cell_complex_dims(self, c):
        """Cohomology dims of the scalar complex at one cell."""
        out = {}
        for i, M in self.terms.items():
            n = M.dims[c]
            out[i] = n - rank(self.d(i, c)) - rank(self.d(i - 1, c))
        return out


def complex_from_module(M: SquarefreeModule, index: int = 0) -> SqComplex:
    return SqComplex(M.K, M.field, {index: M}, {})


def shift(X: SqComplex, n: int) -> SqComplex:
    """``X[n]``: ``X[n]^i = X^{i+n}``, differentials multiplied by ``(-1)^n``."""
    sign = -1 if n % 2 else 1
    terms = {i - n: M for i, M in X.terms.items()}
    diffs = {i - n: {c: (m if sign == 1 else -m) for c, m in D.items()} for i, D in X.diffs.items()}
    return SqComplex(X.K, X.field, terms, diffs)


def face_sum_complex(K: CellComplex, field: Field, terms: dict, blocks: dict) -> SqComplex:
    """Complex whose degree-``p`` term is a sum of face modules with multiplicities.

    ``terms[p]`` lists summands ``(cell, multiplicity)``; ``blocks[p]`` maps
    ``(source_summand, target_summand)`` indices to the multiplicity matrix of
    the component ``k[s]^m -> k[t]^n`` (which needs ``t <= s``).
    """
    modules, diffs = {}, {}
    for p, summands in terms.items():
        dims = {c: sum(m for s, m in summands if K.leq(c, s)) for c in K.cells}
        tr = {}
        for hi, lo in K.coverings:
            # inclusion-by-projection: keep the summands living at hi
            rows, cols = [], []
            for k, (s, m) in enumerate(summands):
                if K.leq(lo, s):
                    cols.append((k, m))
                if K.leq(hi, s):
                    rows.append((k, m))
            bl = {}
            for bi, (k, m) in enumerate(rows):
                bj = [j for j, (k2, _) in enumerate(cols) if k2 == k][0]
                bl[(bi, bj)] = field.eye(m)
            tr[(hi, lo)] = assemble([m for _, m in rows], [m for _, m in cols], bl, field.domain)
        modules[p] = SquarefreeModule(K, field, dims, tr, check=False)
    for p in terms:
        if p + 1 not in terms:
            continue
        src, tgt = terms[p], terms[p + 1]
        diffs[p] = {}
        for c in K.cells:
            cols = [(k, m) for k, (s, m) in enumerate(src) if K.leq(c, s)]
            rows = [(k, m) for k, (s, m) in enumerate(tgt) if K.leq(c, s)]
            bl = {}
            for bi, (kt, _) in enumerate(rows):
                for bj, (ks, _) in enumerate(cols):
                    B = blocks.get(p, {}).get((ks, kt))
                    if B is not None:
                        bl[(bi, bj)] = B
            diffs[p][c] = assemble([m for _, m in rows], [m for _, m in cols], bl, field.domain)
    for M in modules.values():
        bad = M.verify()
        if bad:
            raise SquarefreeError(f"face-sum term is not functorial at {bad[:3]}")
    return SqComplex(K, field, modules, diffs)


def ishida_complex(K: CellComplex, eps: IncidenceFunction, field: Field) -> SqComplex:
    """``I^{-i} = sum over (i-1)-cells s of k[s]``, differential ``1_s -> sum eps(s, t) 1_t``."""
    d = K.dimension
    terms, blocks = {}, {}
    for p in range(-d - 1, 1):
        terms[p] = [(s, 1) for s in K.cells_of_dim(-p - 1)]
    for p in range(-d - 1, 0):
        pos_t = {t: k for k, (t, _) in enumerate(terms[p + 1])}
        bl = {}
        for ks, (s, _) in enumerate(terms[p]):
            for t in K.down[s]:
                bl[(ks, pos_t[t])] = field.scalar(eps(s, t))
        blocks[p] = bl
    return face_sum_complex(K, field, terms, blocks)


def dd_functor(X: SqComplex, eps: IncidenceFunction, interior=None) -> SqComplex:
    """The duality functor on a bounded complex of squarefree modules.

    ``D(X)^p`` is the sum over cells ``s`` and indices ``i`` with
    ``i + dim s + 1 = -p`` of ``(X^i_{c(s)})^* (x) k[s]``.  Here ``X^i_{c(s)}``
    is evaluated through ``interior[s]`` (a degree whose support is ``s``;
    by default the cell itself).  The differential is
    ``eps(s, t) * (phi_{s,t})^*`` towards facets ``t`` of ``s`` plus
    ``(-1)^p * (d^{i-1}_s)^*`` inside one cell.
    """
    K, F = X.K, X.field
    cell_of = (lambda s: interior[s].cell) if interior else (lambda s: s)
    terms, where = {}, {}
    for i, M in X.terms.items():
        for s in K.cells:
            m = M.dims[cell_of(s)]
            if m == 0:
                continue
            p = -(i + K.dims[s] + 1)
            terms.setdefault(p, []).append((s, m))
            where[(i, s)] = (p, len(terms[p]) - 1)
    if not terms:
        return SqComplex(K, F, {0: zero_module(K, F)}, {})
    lo, hi = min(terms), max(terms)
    for p in range(lo, hi + 1):
        terms.setdefault(p, [])
    blocks = {p: {} for p in terms}
    for (i, s), (p, k) in where.items():
        # d': towards facets t of s, same i
        for t in K.down[s]:
            if (i, t) in where:
                p2, k2 = where[(i, t)]
                assert p2 == p + 1
                phi = X.terms[i].transition(cell_of(s), cell_of(t)) if cell_of(s) != cell_of(t) else F.eye(
                    X.terms[i].dims[cell_of(s)])
                B = phi.transpose()
                blocks[p][(k, k2)] = B if eps(s, t) == 1 else -B
        # d'': within s, from index i to i - 1
        if (i - 1, s) in where:
            p2, k2 = where[(i - 1, s)]
            assert p2 == p + 1
            B = X.d(i - 1, cell_of(s)).transpose()
            blocks[p][(k, k2)] = B if p % 2 == 0 else -B
    return face_sum_complex(K, F, terms, blocks)


def sq_cohomology(X: SqComplex) -> dict:
    """``{i: H^i(X)}`` as squarefree modules with induced transitions."""
    K, F = X.K, X.field
    out = {}
    for i in X.indices():
        M = X.terms[i]
        Z, B, Q = {}, {}, {}
        for c in K.cells:
            Z[c] = kernel_basis(X.d(i, c)) if M.dims[c] else F.zeros(0, 0)
            prev = X.d(i - 1, c)
            B[c] = column_basis(prev) if prev.shape[1] and M.dims[c] else F.zeros(M.dims[c], 0)
            Q[c] = extend_basis(B[c], Z[c]) if Z[c].shape[1] else F.zeros(M.dims[c], 0)
        dims = {c: Q[c].shape[1] for c in K.cells}
        tr = {}
        for hi, lo in K.coverings:
            if dims[hi] == 0 or dims[lo] == 0:
                tr[(hi, lo)] = F.zeros(dims[hi], dims[lo])
                continue
            img = M.transitions[(hi, lo)] * Q[lo]
            full = hstack([B[hi], Q[hi]], M.dims[hi], F.domain)
            coords = solve_columns(full, img)
            k = B[hi].shape[1]
            tr[(hi, lo)] = coords.extract(list(range(k, full.shape[1])), list(range(img.shape[1])))
        try:
            out[i] = SquarefreeModule(K, F, dims, tr)
        except SquarefreeError as exc:
            raise SquarefreeError(f"induced transitions on H^{i} do not commute") from exc
    return out


def cohomology_dims_table(X: SqComplex) -> dict:
    """``{i: {cell: dim H^i(X)_cell}}`` computed cell by cell."""
    table = {}
    for c in X.K.cells:
        for i, n in X.cell_complex_dims(c).items():
            table.setdefault(i, {})[c] = n
    return table


def same_complex(X: SqComplex, Y: SqComplex) -> bool:
    """Structural equality: equal terms, transitions and differentials (zero terms ignored)."""
    def nonzero(Z):
        return {i for i, M in Z.terms.items() if not M.is_zero()}
    if nonzero(X) != nonzero(Y):
        return False
    for i in nonzero(X):
        A, B = X.terms[i], Y.terms[i]
        if A.dims != B.dims:
            return False
        if any(A.transitions[p] != B.transitions[p] for p in X.K.coverings):
            return False
        for c in X.K.cells:
            if X.d(i, c) != Y.d(i, c):
                return False
    return True


def duality_check(K: CellComplex, eps: IncidenceFunction, field: Field, samples: int = 25, seed: int = 0,
                  max_dim: int = 2) -> dict:
    """Compare cohomology dims of ``M`` and ``D(D(M))`` on random modules, and ``D(R)`` with ``I``."""
    rng = _random.Random(seed)
    failures = []
    for k in range(samples):
        M = random_squarefree_module(K, field, rng, max_dim=max_dim)
        X = complex_from_module(M)
        DD = dd_functor(dd_functor(X, eps), eps)
        if _support(cohomology_dims_table(X)) != _support(cohomology_dims_table(DD)):
            failures.append(k)
    dual_free = dd_functor(complex_from_module(free_module(K, field)), eps)
    ishida_ok = same_complex(dual_free, ishida_complex(K, eps, field))
    return {"samples": samples, "failures": failures, "dual_of_ring_is_ishida": ishida_ok,
            "passed": not failures and ishida_ok}


def _support(table):
    return {(i, c): n for i, row in table.items() for c, n in row.items() if n}
