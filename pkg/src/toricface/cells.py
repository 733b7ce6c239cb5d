"""Finite regular cell complexes as graded posets, incidence functions, and cellular cochains.

A complex is stored by its face poset: every cell has a dimension, the
unique bottom cell (the empty cell) has dimension -1, and the order is
generated by covering pairs ``(upper, lower)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .linalg import Field, assemble, rank

EMPTY = "∅"


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    cells: tuple = ()

    def to_json(self):
        return {"kind": self.kind, "message": self.message, "cells": list(self.cells)}


class CellComplexError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{d.kind}: {d.message}" for d in self.diagnostics))


class CellComplex:
    """Face poset of a regular cell complex, including the empty cell.

    Build through :func:`validate_complex`; the constructor itself does not
    check the axioms.
    """

    def __init__(self, dims: dict, coverings):
        self.dims = dict(dims)
        bottoms = [c for c, d in self.dims.items() if d == -1]
        self.bottom = bottoms[0] if bottoms else None
        # cells sorted by dimension, stable w.r.t. input order
        order = {c: i for i, c in enumerate(self.dims)}
        self.cells = tuple(sorted(self.dims, key=lambda c: (self.dims[c], order[c])))
        self.index = {c: i for i, c in enumerate(self.cells)}
        down = {c: [] for c in self.cells}
        up = {c: [] for c in self.cells}
        pairs = []
        for hi, lo in coverings:
            if lo in down[hi]:
                continue
            down[hi].append(lo)
            up[lo].append(hi)
            pairs.append((hi, lo))
        key = self.index.__getitem__
        self.down = {c: tuple(sorted(v, key=key)) for c, v in down.items()}
        self.up = {c: tuple(sorted(v, key=key)) for c, v in up.items()}
        self.coverings = tuple(sorted(pairs, key=lambda p: (key(p[0]), key(p[1]))))

    def __repr__(self):
        return f"CellComplex({len(self.cells)} cells, dim {self.dimension})"

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def dimension(self) -> int:
        return max(self.dims.values())

    def dim(self, c) -> int:
        return self.dims[c]

    def cells_of_dim(self, k: int):
        return [c for c in self.cells if self.dims[c] == k]

    @cached_property
    def nonempty_cells(self):
        return tuple(c for c in self.cells if c != self.bottom)

    @cached_property
    def vertices(self):
        return tuple(self.cells_of_dim(0))

    @cached_property
    def maximal_cells(self):
        return tuple(c for c in self.cells if not self.up[c])

    @cached_property
    def _below(self):
        below = {}
        for c in self.cells:  # increasing dimension, so lower cells are done
            s = {c}
            for lo in self.down[c]:
                s |= below[lo]
            below[c] = frozenset(s)
        return below

    @cached_property
    def _above(self):
        above = {c: {c} for c in self.cells}
        for c in self.cells:
            for b in self._below[c]:
                above[b].add(c)
        return {c: frozenset(v) for c, v in above.items()}

    def below(self, c) -> frozenset:
        """Cells ``<= c`` (closed star downwards, including ``c`` and the empty cell)."""
        return self._below[c]

    def above(self, c) -> frozenset:
        """Cells ``>= c``: the open star ``U_c``."""
        return self._above[c]

    def leq(self, a, b) -> bool:
        return a in self._below[b]

    def sorted_cells(self, cells):
        return sorted(cells, key=self.index.__getitem__)

    def join(self, a, b):
        """Unique minimal cell above both, or ``None`` when there is none.

        Raises ``ValueError`` if the minimal upper bounds are not unique.
        """
        common = self._above[a] & self._above[b]
        if not common:
            return None
        minimal = [c for c in common if not any(o != c and o in self._below[c] for o in common)]
        if len(minimal) != 1:
            raise ValueError(f"cells {a!r}, {b!r} have {len(minimal)} minimal common upper bounds")
        return minimal[0]

    def join_many(self, cells):
        cur = self.bottom
        for c in cells:
            cur = self.join(cur, c)
            if cur is None:
                return None
        return cur

    def meet(self, a, b):
        common = self._below[a] & self._below[b]
        maximal = [c for c in common if not any(o != c and c in self._below[o] for o in common)]
        if len(maximal) != 1:
            raise ValueError(f"cells {a!r}, {b!r} have {len(maximal)} maximal common lower bounds")
        return maximal[0]

    def interval(self, lo, hi):
        """Cells ``c`` with ``lo <= c <= hi``."""
        return self._below[hi] & self._above[lo]

    def diamonds(self):
        """All length-two intervals as ``(top, middle1, middle2, bottom)``."""
        out = []
        for top in self.cells:
            seen = {}
            for mid in self.down[top]:
                for lo in self.down[mid]:
                    seen.setdefault(lo, []).append(mid)
            for lo, mids in seen.items():
                if len(mids) == 2:
                    out.append((top, mids[0], mids[1], lo))
        return out

    def to_json(self):
        return {
            "cells": [{"id": c, "dim": self.dims[c]} for c in self.cells],
            "coverings": [[hi, lo] for hi, lo in self.coverings],
        }


# -- validation --------------------------------------------------------------

def diagnose_complex(dims: dict, coverings):
    """List every violated axiom; an empty list means the poset is a valid cell complex."""
    diags = []
    known = set(dims)
    clean = []
    for hi, lo in coverings:
        if hi not in known or lo not in known:
            diags.append(Diagnostic("unknown-cell", f"covering ({hi!r}, {lo!r}) names an unknown cell", (hi, lo)))
            continue
        if dims[hi] != dims[lo] + 1:
            diags.append(Diagnostic(
                "grading", f"covering ({hi!r}, {lo!r}) joins dimensions {dims[hi]} and {dims[lo]}", (hi, lo)))
            continue
        clean.append((hi, lo))
    bottoms = [c for c, d in dims.items() if d == -1]
    if len(bottoms) != 1:
        diags.append(Diagnostic("missing-bottom", f"expected exactly one cell of dimension -1, found {len(bottoms)}",
                                tuple(bottoms)))
    for c, d in dims.items():
        if d < -1:
            diags.append(Diagnostic("grading", f"cell {c!r} has dimension {d} < -1", (c,)))
    if diags:
        return diags
    K = CellComplex(dims, clean)
    for c in K.nonempty_cells:
        if not K.down[c]:
            diags.append(Diagnostic("grading", f"cell {c!r} of dimension {K.dims[c]} covers nothing", (c,)))
    if diags:
        return diags

    for top in K.cells:
        for lo in K.below(top):
            if K.dims[top] - K.dims[lo] == 2:
                mids = [m for m in K.down[top] if lo in K.down[m]]
                if len(mids) != 2:
                    diags.append(Diagnostic(
                        "diamond", f"interval [{lo!r}, {top!r}] has {len(mids)} middle cells, expected 2",
                        (top, lo)))
    cells = K.cells
    for a, b in itertools.combinations(cells, 2):
        common = K.below(a) & K.below(b)
        maximal = [c for c in common if not any(o != c and c in K.below(o) for o in common)]
        if len(maximal) != 1:
            diags.append(Diagnostic(
                "intersection", f"cells {a!r} and {b!r} have maximal common lower bounds {sorted(maximal)}",
                (a, b)))
    return diags


def validate_complex(cells, coverings) -> CellComplex:
    """Validate a cell poset given as ``[(id, dim), ...]`` (or a dict) and covering pairs."""
    dims = dict(cells.items()) if isinstance(cells, dict) else {}
    if not isinstance(cells, dict):
        for c, d in cells:
            if c in dims:
                raise CellComplexError([Diagnostic("duplicate-cell", f"cell id {c!r} appears twice", (c,))])
            dims[c] = int(d)
    coverings = [tuple(p) for p in coverings]
    diags = diagnose_complex(dims, coverings)
    if diags:
        raise CellComplexError(diags)
    return CellComplex(dims, coverings)


def order_complex_reduced_homology(K: CellComplex, cell, field: Field | None = None):
    """Reduced homology ranks of the order complex of the open interval (empty cell, ``cell``)."""
    field = field or Field.rationals()
    inner = [c for c in K.below(cell) if c not in (cell, K.bottom)]
    # chains of the open interval, listed by increasing length
    chains_by_len = {0: [()]}
    frontier = [(c,) for c in inner]
    k = 1
    while frontier:
        chains_by_len[k] = frontier
        nxt = []
        for ch in frontier:
            for c in inner:
                if K.dims[c] > K.dims[ch[-1]] and ch[-1] in K.below(c):
                    nxt.append(ch + (c,))
        frontier = nxt
        k += 1
    index = {k: {ch: i for i, ch in enumerate(v)} for k, v in chains_by_len.items()}
    ranks = {}
    for k in range(1, max(chains_by_len) + 1):
        rows = [[0] * len(chains_by_len[k]) for _ in range(len(chains_by_len[k - 1]))]
        for j, ch in enumerate(chains_by_len[k]):
            for pos in range(len(ch)):
                face = ch[:pos] + ch[pos + 1:]
                rows[index[k - 1][face]][j] += (-1) ** pos
        ranks[k] = rank(field.matrix(rows, (len(rows), len(chains_by_len[k]))))
    result = {}
    top = max(chains_by_len)
    for k in range(0, top + 1):
        n = len(chains_by_len[k])
        # reduced homology index k-1 for chains of length k
        result[k - 1] = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
    return {i: v for i, v in result.items() if v}


def sphere_report(K: CellComplex, field: Field | None = None) -> dict:
    """For each nonempty cell: does its boundary interval have the homology of a sphere?"""
    out = {}
    for c in K.nonempty_cells:
        h = order_complex_reduced_homology(K, c, field)
        out[c] = h == {K.dims[c] - 1: 1}
    return out


# -- incidence functions -----------------------------------------------------

class IncidenceError(ValueError):
    def __init__(self, diamonds):
        self.diamonds = list(diamonds)
        super().__init__(f"no incidence function exists; inconsistent diamonds: {self.diamonds}")


@dataclass(frozen=True)
class IncidenceFunction:
    complex: CellComplex
    signs: dict

    def __call__(self, upper, lower) -> int:
        return self.signs.get((upper, lower), 0)

    def violations(self):
        bad = []
        for top, m1, m2, lo in self.complex.diamonds():
            if self(top, m1) * self(m1, lo) + self(top, m2) * self(m2, lo) != 0:
                bad.append((top, m1, m2, lo))
        missing = [p for p in self.complex.coverings if self.signs.get(p) not in (1, -1)]
        return bad + [("missing", p) for p in missing]

    def flipped(self, pairs) -> "IncidenceFunction":
        signs = dict(self.signs)
        for p in pairs:
            signs[p] = -signs[p]
        return IncidenceFunction(self.complex, signs)


def _gf2_system(K: CellComplex):
    """Rows ``(mask, rhs)`` over GF(2), one per diamond, in covering-index variables."""
    var = {p: i for i, p in enumerate(K.coverings)}
    fixed = {p for p in K.coverings if p[1] == K.bottom}
    rows = []
    diamonds = K.diamonds()
    for top, m1, m2, lo in diamonds:
        mask, rhs = 0, 1
        for p in ((top, m1), (m1, lo), (top, m2), (m2, lo)):
            if p in fixed:
                continue  # exponent fixed to 0: sign +1
            mask ^= 1 << var[p]
        rows.append((mask, rhs))
    return var, fixed, rows, diamonds


def _gf2_solve(rows, nvars):
    """Reduced echelon form with provenance. Returns (pivot_rows, inconsistent_provenance)."""
    pivots = {}  # pivot bit -> (mask, rhs, provenance)
    for k, (mask, rhs) in enumerate(rows):
        prov = 1 << k
        for bit, (pm, pr, pp) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
                prov ^= pp
        if mask == 0:
            if rhs:
                return pivots, prov
            continue
        bit = mask.bit_length() - 1
        for b2, (pm, pr, pp) in list(pivots.items()):
            if pm >> bit & 1:
                pivots[b2] = (pm ^ mask, pr ^ rhs, pp ^ prov)
        pivots[bit] = (mask, rhs, prov)
    return pivots, None


def synthesize_incidence(K: CellComplex) -> IncidenceFunction:
    """An incidence function with ``eps(v, empty) = +1`` for every vertex ``v``."""
    var, fixed, rows, diamonds = _gf2_system(K)
    pivots, bad = _gf2_solve(rows, len(var))
    if bad is not None:
        raise IncidenceError([diamonds[k] for k in range(len(rows)) if bad >> k & 1])
    exps = [0] * len(var)
    for bit, (mask, rhs, _) in pivots.items():
        exps[bit] = rhs  # free variables are zero; reduced form leaves only free bits besides the pivot
    signs = {}
    for p, i in var.items():
        signs[p] = 1 if p in fixed else (-1 if exps[i] else 1)
    eps = IncidenceFunction(K, signs)
    bad = eps.violations()
    if bad:
        raise IncidenceError(bad)
    return eps


def incidence_gauge_basis(K: CellComplex):
    """Sets of covering pairs whose simultaneous sign flip maps incidence functions to incidence functions.

    These span the solutions of the homogeneous diamond system (with the
    normalization ``eps(v, empty) = +1`` kept fixed).
    """
    var, fixed, rows, _ = _gf2_system(K)
    pivots, _ = _gf2_solve([(m, 0) for m, _ in rows], len(var))
    inv = {i: p for p, i in var.items()}
    free = [i for i, p in inv.items() if p not in fixed and i not in pivots]
    basis = []
    for f in free:
        flip = {f}
        for bit, (mask, _, _) in pivots.items():
            if mask >> f & 1:
                flip.add(bit)
        basis.append([inv[i] for i in sorted(flip)])
    return basis


# -- cellular cochain complexes ----------------------------------------------

class CoefficientError(ValueError):
    pass


class ConstantCoefficients:
    """The constant coefficient system: ``k`` at every cell, identity transitions."""

    def __init__(self, field: Field):
        self.field = field

    def dim(self, cell) -> int:
        return 1

    def transition(self, upper, lower):
        return self.field.eye(1)


class ZeroCoefficients(ConstantCoefficients):
    def dim(self, cell) -> int:
        return 0

    def transition(self, upper, lower):
        return self.field.zeros(0, 0)


@dataclass
class CochainComplex:
    """Finite cochain complex over a field.

    ``basis[j]`` labels the basis of ``C^j``; ``differentials[j]`` is the
    matrix of ``C^j -> C^{j+1}`` (shape ``(dim C^{j+1}, dim C^j)``).
    """

    field: Field
    basis: dict
    differentials: dict = dc_field(default_factory=dict)

    def dims(self) -> dict:
        return {j: len(b) for j, b in sorted(self.basis.items())}

    def indices(self):
        return sorted(self.basis)

    def d(self, j):
        if j in self.differentials:
            return self.differentials[j]
        return self.field.zeros(len(self.basis.get(j + 1, ())), len(self.basis.get(j, ())))

    def check(self) -> bool:
        for j in self.indices():
            a, b = self.d(j), self.d(j + 1)
            if a.shape[0] and a.shape[1] and b.shape[0] and not (b * a).is_zero_matrix:
                return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** (j % 2) * n for j, n in self.dims().items())


def cohomology_dims(C: CochainComplex) -> dict:
    """``dim ker d^j - rank d^{j-1}`` at every index carrying a nonzero term (others are 0)."""
    out = {}
    for j in C.indices():
        n = len(C.basis[j])
        out[j] = n - rank(C.d(j)) - rank(C.d(j - 1))
    return out


def cellular_complex(K: CellComplex, eps: IncidenceFunction, coeffs=None, support=None,
                     augmented: bool = False, field: Field | None = None) -> CochainComplex:
    """Cellular cochains ``C^j = sum_{dim t = j} M_t`` with ``eps``-signed transition differentials.

    ``support=None`` uses all nonempty cells (plus the empty cell at index
    -1 when ``augmented``); otherwise ``support`` names a cell ``s`` and the
    complex lives on the open star ``U_s``.
    """
    if coeffs is None:
        coeffs = ConstantCoefficients(field or Field.rationals())
    field = field or coeffs.field
    if support is None:
        cells = [c for c in K.cells if augmented or c != K.bottom]
    else:
        cells = [c for c in K.cells if c in K.above(support) and (augmented or c != K.bottom)]
    in_support = set(cells)
    by_dim: dict = {}
    for c in cells:
        by_dim.setdefault(K.dims[c], []).append(c)
    lo = -1 if augmented else 0
    basis = {}
    for j in range(lo, K.dimension + 1):
        basis[j] = [(c, k) for c in by_dim.get(j, []) for k in range(coeffs.dim(c))]
    hi = K.dimension
    diffs = {}
    for j in range(lo, hi):
        src = by_dim.get(j, [])
        tgt = by_dim.get(j + 1, [])
        blocks = {}
        for bj, t in enumerate(src):
            for bi, t2 in enumerate(tgt):
                if t in K.down[t2] and t2 in in_support:
                    try:
                        phi = coeffs.transition(t2, t)
                    except KeyError as exc:
                        raise CoefficientError(f"missing transition map for ({t2!r}, {t!r})") from exc
                    if phi is None:
                        raise CoefficientError(f"missing transition map for ({t2!r}, {t!r})")
                    s = eps(t2, t)
                    blocks[(bi, bj)] = phi if s == 1 else -phi
        diffs[j] = assemble([coeffs.dim(t) for t in tgt], [coeffs.dim(t) for t in src], blocks, field.domain)
    return CochainComplex(field, basis, diffs)


def reduced_cohomology(K: CellComplex, field: Field | None = None, eps: IncidenceFunction | None = None) -> dict:
    """Reduced cohomology of the underlying space, indices -1 .. dim K."""
    eps = eps or synthesize_incidence(K)
    return cohomology_dims(cellular_complex(K, eps, ConstantCoefficients(field or Field.rationals()),
                                            augmented=True))


def cohomology(K: CellComplex, field: Field | None = None, eps: IncidenceFunction | None = None) -> dict:
    """Ordinary cohomology of the underlying space, indices 0 .. dim K."""
    eps = eps or synthesize_incidence(K)
    return cohomology_dims(cellular_complex(K, eps, ConstantCoefficients(field or Field.rationals())))
