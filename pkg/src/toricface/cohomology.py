"""Graded local cohomology, canonical modules, and ring-property verdicts.

Two independent routes to ``[H^i_m(R)]_b``:

* the topological one: cellular cohomology of the space (degree 0) or
  compactly supported cohomology of an open star (degree ``-a``);
* a degreewise Cech oracle: one copy of ``k`` in index ``dim t + 1`` for
  every cell ``t`` whose monomial localization is nonzero in degree ``b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .cells import (
    CochainComplex,
    ConstantCoefficients,
    IncidenceFunction,
    cellular_complex,
    cohomology_dims,
    synthesize_incidence,
)
from .linalg import Field, rank
from .monoidal import Degree, MonoidalComplex
from .polyhedral import localized_membership
from .presentation import MonomialIdeal, _mono_str, evaluate, variables
from .squarefree import (
    SquarefreeModule,
    free_module,
    ishida_complex,
    sq_cohomology,
)


class NotNormalError(ValueError):
    pass


def sheaf_cohomology(M, eps: IncidenceFunction, support=None, field: Field | None = None) -> dict:
    """Cohomology of the non-augmented cellular complex with coefficients ``M``.

    ``support=None`` is the whole (compact) space; a cell ``s`` gives the
    compactly supported cohomology of the open star of ``s``.
    """
    K = eps.complex
    return cohomology_dims(cellular_complex(K, eps, M, support=support, augmented=False, field=field))


def reduced_cohomology(K, field: Field, eps: IncidenceFunction | None = None) -> dict:
    eps = eps or synthesize_incidence(K)
    return cohomology_dims(cellular_complex(K, eps, ConstantCoefficients(field), augmented=True))


def _is_negative_of_semigroup(mc: MonoidalComplex, b: Degree) -> bool:
    """Does ``-b`` lie in the semigroup arena (with ``b`` in canonical form)?"""
    if b.cell == mc.K.bottom:
        return True
    neg = tuple(-x for x in b.vector)
    return mc.cones[b.cell].in_relint(neg) and mc.in_semigroup(b.cell, neg)


def local_cohomology_dim(M: SquarefreeModule, i: int, b: Degree, mc: MonoidalComplex,
                         eps: IncidenceFunction) -> int:
    """``dim [H^i_m(M)]_b`` for a squarefree module ``M``.

    Degree 0 uses the cellular complex of the space together with the
    evaluation map ``M_empty -> H^0``; a degree ``-a`` with ``a != 0`` in the
    semigroup arena uses the compactly supported cohomology of the open star
    of ``supp(a)``.  Every other degree gives 0.
    """
    K = mc.K
    if i < 0:
        return 0
    if b.cell == K.bottom:
        if i >= 2:
            return sheaf_cohomology(M, eps).get(i - 1, 0)
        C = cellular_complex(K, eps, M, augmented=True)
        evaluation = C.d(-1)          # M_empty -> C^0, lands in H^0 = ker d^0
        h0 = cohomology_dims(cellular_complex(K, eps, M, augmented=False)).get(0, 0)
        r = rank(evaluation)
        if i == 0:
            return M.dims[K.bottom] - r     # kernel of the evaluation map
        return h0 - r                        # cokernel of the evaluation map
    if not _is_negative_of_semigroup(mc, b):
        return 0
    return sheaf_cohomology(M, eps, support=b.cell).get(i - 1, 0)


def cech_survivors(mc: MonoidalComplex, b: Degree) -> frozenset:
    """Cells ``t`` whose monomial localization ``T_t^{-1} R`` is nonzero in degree ``b``."""
    K = mc.K
    reps = mc.degree_class(b.cell, b.vector) if b.cell != K.bottom else [b]
    out = set()
    for t in K.cells:
        ok = False
        for mu in K.above(t):
            for r in reps:
                if not K.leq(r.cell, mu):
                    continue
                v = mc.push(mu, r.cell, r.vector)
                if mc.d(mu) == 0:
                    ok = True
                elif localized_membership(v, mc.cones[mu], mc.face_of(mu, t), mc.lattices[mu]):
                    ok = True
                if ok:
                    break
            if ok:
                break
        if ok:
            out.add(t)
    return frozenset(out)


class CechOracle:
    """Degreewise Cech complex of ``R``; results cached by the set of surviving cells."""

    def __init__(self, mc: MonoidalComplex, eps: IncidenceFunction, field: Field):
        self.mc, self.eps, self.field = mc, eps, field
        self._cache = {}

    def dims(self, b: Degree) -> dict:
        S = cech_survivors(self.mc, b)
        if S not in self._cache:
            K = self.mc.K
            cells_by = {}
            for t in K.sorted_cells(S):
                cells_by.setdefault(K.dims[t] + 1, []).append(t)
            basis = {j: [(t, 0) for t in cells_by.get(j, [])] for j in range(0, K.dimension + 2)}
            diffs = {}
            for j in range(0, K.dimension + 1):
                src, tgt = cells_by.get(j, []), cells_by.get(j + 1, [])
                rows = [[self.eps(t2, t) for t in src] for t2 in tgt]
                diffs[j] = self.field.matrix(rows, (len(tgt), len(src)))
            self._cache[S] = cohomology_dims(CochainComplex(self.field, basis, diffs))
        return self._cache[S]

    def __call__(self, i: int, b: Degree) -> int:
        return self.dims(b).get(i, 0)


def cech_oracle_dim(mc: MonoidalComplex, i: int, b: Degree, eps: IncidenceFunction | None = None,
                    field: Field | None = None) -> int:
    eps = eps or synthesize_incidence(mc.K)
    return CechOracle(mc, eps, field or Field.rationals())(i, b)


def sweep_degrees(mc: MonoidalComplex, bound: int):
    """``0`` and every ``a``, ``-a`` for nonzero ``a`` a sum of at most ``bound`` generators."""
    out = []
    for a in mc.enumerate_degrees(bound):
        out.append(a)
        if a.cell != mc.K.bottom:
            out.append(mc.negate(a))
    return out


def oracle_sweep(mc: MonoidalComplex, bound: int, field: Field | None = None, eps=None) -> dict:
    """Compare both routes on every degree of :func:`sweep_degrees` and every ``0 <= i <= d + 1``."""
    field = field or Field.rationals()
    eps = eps or synthesize_incidence(mc.K)
    R = free_module(mc.K, field)
    oracle = CechOracle(mc, eps, field)
    star_cache = {}
    degrees = sweep_degrees(mc, bound)
    comparisons, mismatches = 0, []
    for b in degrees:
        for i in range(0, mc.dimension + 2):
            key = (b.cell, _is_negative_of_semigroup(mc, b), i) if b.cell != mc.K.bottom else ("0", i)
            if key not in star_cache:
                star_cache[key] = local_cohomology_dim(R, i, b, mc, eps)
            top = star_cache[key]
            orc = oracle(i, b)
            comparisons += 1
            if top != orc:
                mismatches.append({"degree": [b.cell, list(b.vector)], "i": i, "topological": top, "cech": orc})
    return {"degrees": len(degrees), "comparisons": comparisons, "mismatches": mismatches,
            "agree": not mismatches}


# -- ring properties ---------------------------------------------------------

@dataclass
class CohomologyReport:
    field: Field
    dimension: int
    local_cohomology: dict           # i -> {cell: dim}, the empty cell standing for degree 0
    reduced_cohomology: dict         # i -> dim of reduced H^i(X)
    cohomology: dict                 # i -> dim of H^i(X)
    ishida_cohomology: dict          # j -> {cell: dim H^j(I)_cell}
    buchsbaum: bool
    cohen_macaulay: bool
    gorenstein_star: bool
    canonical_module: SquarefreeModule | None = None
    canonical_ideal: list | None = None         # generator degrees when the module embeds
    canonical_ideal_names: list | None = None
    canonical_ideal_isomorphic: bool | None = None
    poincare: dict = dc_field(default_factory=dict)   # i -> (dim H^i(X), dim H^{d-i}(X, or_X))
    epsilon_convention: str = "eps(v, empty) = +1"

    def to_json(self):
        out = {
            "field": self.field.to_json(),
            "dimension": self.dimension,
            "epsilon_convention": self.epsilon_convention,
            "buchsbaum": self.buchsbaum,
            "cohen_macaulay": self.cohen_macaulay,
            "gorenstein_star": self.gorenstein_star,
            "reduced_cohomology": {str(i): n for i, n in self.reduced_cohomology.items()},
            "cohomology": {str(i): n for i, n in self.cohomology.items()},
            "local_cohomology": {str(i): row for i, row in self.local_cohomology.items()},
            "ishida_cohomology": {str(j): {c: n for c, n in row.items() if n}
                                  for j, row in self.ishida_cohomology.items()},
            "poincare": {str(i): list(v) for i, v in self.poincare.items()},
        }
        if self.canonical_module is not None:
            out["canonical_module_dims"] = {c: n for c, n in self.canonical_module.dims.items() if n}
        if self.canonical_ideal_names is not None:
            out["canonical_ideal"] = self.canonical_ideal_names
            out["canonical_ideal_isomorphic"] = self.canonical_ideal_isomorphic
        return out

    def text(self) -> str:
        lines = [f"field: {self.field.name}   dim X = {self.dimension}   ({self.epsilon_convention})",
                 f"Buchsbaum: {self.buchsbaum}   Cohen-Macaulay: {self.cohen_macaulay}   "
                 f"Gorenstein*: {self.gorenstein_star}",
                 "reduced cohomology of X: " + ", ".join(f"H~^{i}={n}" for i, n in self.reduced_cohomology.items())]
        lines.append("local cohomology [H^i_m(R)] by support cell (empty cell = degree 0):")
        for i, row in self.local_cohomology.items():
            nz = {c: n for c, n in row.items() if n}
            lines.append(f"  i={i}: {nz if nz else 0}")
        if self.canonical_ideal_names is not None:
            tag = "" if self.canonical_ideal_isomorphic else " (same support; transitions twisted over this field)"
            lines.append("canonical module as monomial ideal: (" + ", ".join(self.canonical_ideal_names) + ")" + tag)
        if self.poincare:
            lines.append("Poincare duality H^i(X) vs H^{d-i}(X, or_X): " +
                         ", ".join(f"{i}: {a}/{b}" for i, (a, b) in self.poincare.items()))
        return "\n".join(lines)


def _rescalable_to_identity(M: SquarefreeModule) -> bool:
    """For a module with all spaces of dim <= 1 and nonzero transitions: can the bases be rescaled so
    every transition between nonzero spaces is the identity?"""
    K, F = M.K, M.field
    scale = {}
    support = [c for c in K.cells if M.dims[c]]
    for start in support:
        if start in scale:
            continue
        scale[start] = F.domain.one
        stack = [start]
        while stack:
            c = stack.pop()
            nbrs = [(u, (u, c)) for u in K.up[c]] + [(l, (c, l)) for l in K.down[c]]
            for other, pair in nbrs:
                if not M.dims[other]:
                    continue
                x = M.transitions[pair].to_list()[0][0]
                # after rescaling e_c -> e_c / scale[c] the transition becomes scale[hi]^-1 * x * scale[lo]
                hi, lo = pair
                if hi in scale and lo in scale:
                    if scale[lo] * x != scale[hi]:
                        return False
                elif hi in scale:
                    scale[lo] = scale[hi] / x
                    stack.append(lo)
                else:
                    scale[hi] = scale[lo] * x
                    stack.append(hi)
    return True


def _monomial_name(mc, vars_, a: Degree) -> str:
    """A monomial in the variables hitting ``a``, lexicographically largest exponent vector first."""
    for k in range(0, 8):
        best = None
        for combo in itertools.combinations_with_replacement(range(len(vars_)), k):
            e = [0] * len(vars_)
            for i in combo:
                e[i] += 1
            if evaluate(mc, vars_, e) == a:
                if best is None or tuple(e) > best:
                    best = tuple(e)
        if best is not None:
            return _mono_str(vars_, best)
    return mc.format_degree(a)


def canonical_ideal(mc: MonoidalComplex, omega: SquarefreeModule, bound: int | None = None):
    """Monomial generators of the ideal spanned by ``t^a`` with ``omega_{supp a} != 0``.

    Returns ``None`` unless every space has dimension <= 1 and every
    transition between nonzero spaces is injective.
    """
    K = mc.K
    if any(n > 1 for n in omega.dims.values()):
        return None
    for (hi, lo), M in omega.transitions.items():
        if omega.dims[lo] and (not omega.dims[hi] or M.to_list()[0][0] == 0):
            return None
    support = {c for c in K.cells if omega.dims[c]}
    bound = bound or mc.dimension + 1
    cands = [a for a in mc.enumerate_degrees(bound) if a.cell in support]
    return list(MonomialIdeal(mc, cands).generators)


def ring_properties(mc: MonoidalComplex, field: Field | None = None, eps: IncidenceFunction | None = None,
                    sample_bound: int = 1) -> CohomologyReport:
    """Buchsbaum / Cohen-Macaulay / Gorenstein* verdicts from the cohomology of the Ishida complex."""
    if not mc.cone_wise_normal:
        bad = [c for c, ok in mc.normal.items() if not ok]
        raise NotNormalError(f"semigroups of cells {bad} are not normal")
    field = field or Field.rationals()
    K = mc.K
    eps = eps or synthesize_incidence(K)
    d = K.dimension
    I = ishida_complex(K, eps, field)
    H = sq_cohomology(I)
    ishida = {j: dict(h.dims) for j, h in H.items()}
    buchsbaum = all(ishida[j][c] == 0 for j in ishida if j != -d - 1 for c in K.nonempty_cells)
    red = reduced_cohomology(K, field, eps)
    coh = cohomology_dims(cellular_complex(K, eps, ConstantCoefficients(field)))
    cm = buchsbaum and all(n == 0 for i, n in red.items() if i != d)
    if d >= 1:
        gor = cm and all(ishida[-d - 1][c] == 1 for c in K.nonempty_cells) and coh.get(d, 0) != 0
    elif d == 0:
        gor = cm and len(K.vertices) == 2
    else:
        gor = cm
    R = free_module(K, field)
    table = {}
    for i in range(0, d + 2):
        row = {}
        for c in K.cells:
            if c == K.bottom:
                row[c] = local_cohomology_dim(R, i, mc.zero(), mc, eps)
            else:
                row[c] = sheaf_cohomology(R, eps, support=c).get(i - 1, 0)
        table[i] = row
    report = CohomologyReport(field, d, table, red, coh, ishida, buchsbaum, cm, gor)
    if buchsbaum:
        omega = H[-d - 1]
        report.canonical_module = omega
        orx = omega.restricted_to_nonempty()
        or_coh = sheaf_cohomology(orx, eps)
        report.poincare = {i: (coh.get(i, 0), or_coh.get(d - i, 0)) for i in range(0, d + 1)}
        gens = canonical_ideal(mc, omega)
        if gens is not None:
            vars_ = variables(mc)
            report.canonical_ideal = gens
            report.canonical_ideal_names = [_monomial_name(mc, vars_, a) for a in gens]
            report.canonical_ideal_isomorphic = _rescalable_to_identity(orx)
    return report
