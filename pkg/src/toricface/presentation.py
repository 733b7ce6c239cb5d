"""Monomials of a toric face ring, graded primes, radicals, and the presentation ideal.

A polynomial ring ``S`` has one variable per semigroup generator (deduplicated
through the gluings); the surjection ``S -> k[M]`` sends ``X_e`` to ``t^{a_e}``.
Its kernel is generated by squarefree monomials on variable sets lying in no
common cell, plus the toric ideals of the maximal cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .monoidal import Degree, MonoidalComplex
from .polyhedral import EnumerationCapError


class PresentationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    degree: Degree


def variables(mc: MonoidalComplex):
    """One variable per distinct generator degree; vertex labels name the vertex generators."""
    gens = mc.generator_degrees
    per_cell = {}
    for g in gens:
        per_cell.setdefault(g.cell, []).append(g)
    out = []
    for g in gens:
        cell = g.cell
        lab = mc.label(cell)
        if mc.K.dims[cell] == 0 and len(per_cell[cell]) == 1:
            name = lab
        else:
            name = f"{lab}_{per_cell[cell].index(g)}"
        out.append(Variable(name, g))
    return out


def multiply_monomials(mc: MonoidalComplex, a: Degree, b: Degree):
    """``t^a * t^b``: the degree of the product, or ``None`` for the zero monomial."""
    if a is None or b is None:
        return None
    return mc.add_degrees(a, b)


def evaluate(mc: MonoidalComplex, vars_, exponents):
    """Degree of the monomial ``prod X_e^{u_e}`` in ``k[M]``, ``None`` when it is zero."""
    cur = mc.zero()
    for v, e in zip(vars_, exponents):
        for _ in range(e):
            cur = mc.add_degrees(cur, v.degree)
            if cur is None:
                return None
    return cur


# -- monomial ideals ---------------------------------------------------------

def divides(mc: MonoidalComplex, a: Degree, b: Degree) -> bool:
    """``t^a | t^b``: some ``c`` in the arena has ``a + c = b``."""
    if not mc.K.leq(a.cell, b.cell):
        return False
    diff = tuple(x - y for x, y in zip(b.vector, mc.push(b.cell, a.cell, a.vector)))
    return mc.in_semigroup(b.cell, diff)


class MonomialIdeal:
    """Ideal of ``k[M]`` generated by monomials ``t^a``; generators kept minimal."""

    def __init__(self, mc: MonoidalComplex, generators):
        self.mc = mc
        gens = []
        for g in sorted(set(generators), key=lambda d: (mc.K.index[d.cell], d.vector)):
            gens.append(g)
        minimal = [g for g in gens if not any(h != g and divides(mc, h, g) for h in gens)]
        self.generators = tuple(minimal)

    def __contains__(self, a: Degree) -> bool:
        return any(divides(self.mc, g, a) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash(frozenset(self.generators))

    def __repr__(self):
        return f"MonomialIdeal({list(self.generators)})"

    def is_zero(self) -> bool:
        return not self.generators

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        return all(g in self for g in other.generators)


class GradedPrime(MonomialIdeal):
    """``p_s``: spanned by the monomials whose support is not below ``s``."""

    def __init__(self, mc: MonoidalComplex, cell):
        self.cell = cell
        super().__init__(mc, [g for g in mc.generator_degrees if not mc.K.leq(g.cell, cell)])

    def __contains__(self, a: Degree) -> bool:
        return not self.mc.K.leq(a.cell, self.cell)


def graded_primes(mc: MonoidalComplex):
    """``[(s, p_s)]`` for every cell, the empty cell giving the maximal ideal."""
    return [(s, GradedPrime(mc, s)) for s in mc.K.cells]


def minimal_primes(mc: MonoidalComplex):
    return [(s, GradedPrime(mc, s)) for s in mc.K.maximal_cells]


def generator_length(mc: MonoidalComplex, a: Degree, limit: int = 12) -> int:
    """Least number of generators summing to ``a``."""
    for k in range(limit + 1):
        if a in mc.enumerate_degrees(k):
            return k
    raise EnumerationCapError(f"degree {a} needs more than {limit} generators")


def radical(I: MonomialIdeal, bound: int | None = None) -> MonomialIdeal:
    """``sqrt(I)``: ``t^a`` is in it iff some generator's support lies below ``supp(a)``.

    Minimal generators are searched among degrees that are sums of at most
    ``bound`` generators (default: the longest generator of ``I``, but at
    least ``dim + 1``).
    """
    mc = I.mc
    if not I.generators:
        return MonomialIdeal(mc, [])
    if bound is None:
        bound = max(max(generator_length(mc, g) for g in I.generators), mc.dimension + 1)
    cells = {g.cell for g in I.generators}
    cands = [a for a in mc.enumerate_degrees(bound) if any(mc.K.leq(c, a.cell) for c in cells)]
    return RadicalIdeal(mc, cands, cells)


class RadicalIdeal(MonomialIdeal):
    def __init__(self, mc, generators, cells):
        super().__init__(mc, generators)
        self.cells = frozenset(cells)

    def __contains__(self, a: Degree) -> bool:
        return any(self.mc.K.leq(c, a.cell) for c in self.cells)


# -- presentation ------------------------------------------------------------

def _monomials(nvars: int, max_deg: int):
    out = []
    for d in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _mono_str(vars_, u) -> str:
    parts = []
    for v, e in zip(vars_, u):
        if e == 1:
            parts.append(f"X_{v.name}")
        elif e > 1:
            parts.append(f"X_{v.name}^{e}")
    return "".join(parts) or "1"


class IdealReducer:
    """Degree-truncated quotient ``S / J`` for ``J`` generated by monomials and pure binomials.

    Monomials of total degree ``<= D`` are merged along binomial moves and
    flagged zero when divisible by a monomial generator; ``S/J`` in these
    degrees has one basis vector per unflagged class.
    """

    def __init__(self, nvars: int, D: int, monomials=(), binomials=()):
        self.D = D
        self.mons = _monomials(nvars, D)
        self.index = {m: i for i, m in enumerate(self.mons)}
        parent = list(range(len(self.mons)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        zero = [False] * len(self.mons)
        for i, m in enumerate(self.mons):
            if any(all(a >= b for a, b in zip(m, g)) for g in monomials):
                zero[i] = True
        for u, v in binomials:
            for i, m in enumerate(self.mons):
                for a, b in ((u, v), (v, u)):
                    if all(x >= y for x, y in zip(m, a)):
                        m2 = tuple(x - y + z for x, y, z in zip(m, a, b))
                        j = self.index.get(m2)
                        if j is not None:
                            ri, rj = find(i), find(j)
                            if ri != rj:
                                parent[ri] = rj
        self.root = [find(i) for i in range(len(self.mons))]
        zero_root = set()
        for i, z in enumerate(zero):
            if z:
                zero_root.add(self.root[i])
        self.zero_root = zero_root

    def is_zero(self, m) -> bool:
        return self.root[self.index[tuple(m)]] in self.zero_root

    def equivalent(self, a, b) -> bool:
        """``X^a - X^b`` lies in the ideal (within the truncation)."""
        ra, rb = self.root[self.index[tuple(a)]], self.root[self.index[tuple(b)]]
        return ra == rb or (ra in self.zero_root and rb in self.zero_root)

    def classes(self, degree: int | None = None):
        """Nonzero classes, each as the list of its monomials (restricted to one total degree if given)."""
        out = {}
        for i, m in enumerate(self.mons):
            if degree is not None and sum(m) != degree:
                continue
            r = self.root[i]
            if r not in self.zero_root:
                out.setdefault(r, []).append(m)
        return list(out.values())


@dataclass
class Presentation:
    variables: list
    squarefree_part: list          # minimal nonfaces, as sorted tuples of variable indices
    binomial_part: list            # (u, v) exponent tuples, u > v lexicographically
    degree_bound: int
    generators: list = field(default_factory=list)   # minimal generating set: ("monomial", u) | ("binomial", u, v)
    certificate: dict = field(default_factory=dict)

    def names(self):
        return [v.name for v in self.variables]

    def monomial(self, names) -> tuple:
        """Exponent vector from a list of variable names (repetition allowed)."""
        idx = {v.name: i for i, v in enumerate(self.variables)}
        e = [0] * len(self.variables)
        for n in names:
            e[idx[n]] += 1
        return tuple(e)

    def generator_strings(self):
        out = []
        for g in self.generators:
            if g[0] == "monomial":
                out.append(_mono_str(self.variables, g[1]))
            else:
                out.append(f"{_mono_str(self.variables, g[1])} - {_mono_str(self.variables, g[2])}")
        return out

    @cached_property
    def reducer(self) -> IdealReducer:
        return _reducer_for(len(self.variables), self.degree_bound, self.generators)

    def reduces_to_zero(self, exponents, bound: int | None = None) -> bool:
        """Does ``X^exponents`` lie in the emitted ideal?"""
        D = max(self.degree_bound, sum(exponents)) if bound is None else bound
        R = self.reducer if D == self.degree_bound else _reducer_for(len(self.variables), D, self.generators)
        return R.is_zero(exponents)

    def to_json(self):
        return {
            "variables": [{"name": v.name, "cell": v.degree.cell, "vector": list(v.degree.vector)}
                          for v in self.variables],
            "degree_bound": self.degree_bound,
            "generators": self.generator_strings(),
            "squarefree_part": [[self.variables[i].name for i in H] for H in self.squarefree_part],
            "binomial_part": [[_mono_str(self.variables, u), _mono_str(self.variables, v)]
                              for u, v in self.binomial_part],
            "certificate": self.certificate,
        }


def _reducer_for(n, D, generators):
    mons = [g[1] for g in generators if g[0] == "monomial"]
    bins = [(g[1], g[2]) for g in generators if g[0] == "binomial"]
    return IdealReducer(n, D, mons, bins)


def minimal_nonfaces(mc: MonoidalComplex, vars_):
    """Minimal variable sets whose degrees lie in no common cell (breadth-first over subset size)."""
    K = mc.K
    n = len(vars_)
    faces = {(): K.bottom}
    out = []
    level = [()]
    while level:
        nxt = {}
        for H in level:
            for i in range(H[-1] + 1 if H else 0, n):
                H2 = H + (i,)
                # every proper subset must be a face for H2 to be a minimal nonface candidate
                subs = [H2[:k] + H2[k + 1:] for k in range(len(H2))]
                if not all(s in faces for s in subs):
                    continue
                j = K.join(faces[H], vars_[i].degree.cell)
                if j is None:
                    out.append(H2)
                else:
                    nxt[H2] = j
        faces.update(nxt)
        level = sorted(nxt)
    return out


def _cell_binomials(mc, vars_, cell, D):
    """Binomials generating the toric ideal of one cell through total degree ``D``."""
    idx = [i for i, v in enumerate(vars_) if mc.K.leq(v.degree.cell, cell)]
    n = len(vars_)
    vecs = {i: mc.push(cell, vars_[i].degree.cell, vars_[i].degree.vector) for i in idx}
    fibers = {}
    for local in _monomials(len(idx), D):
        img = tuple(sum(e * vecs[i][k] for e, i in zip(local, idx)) for k in range(mc.d(cell)))
        u = [0] * n
        for e, i in zip(local, idx):
            u[i] = e
        fibers.setdefault(img, []).append(tuple(u))
    chosen = []
    for img in sorted(fibers, key=lambda im: (min(sum(m) for m in fibers[im]), im)):
        mons = sorted(fibers[img], key=lambda m: (sum(m), tuple(-x for x in m)))
        if len(mons) < 2:
            continue
        R = IdealReducer(n, max(sum(m) for m in mons), (), chosen)
        for m in mons[1:]:
            if not R.equivalent(mons[0], m):
                u, v = (mons[0], m) if mons[0] > m else (m, mons[0])
                chosen.append((u, v))
                R = IdealReducer(n, max(sum(x) for x in mons), (), chosen)
    return chosen


def present_ideal(mc: MonoidalComplex, D: int = 3, vars_=None) -> Presentation:
    """Presentation ideal through total degree ``D`` with a completeness certificate."""
    vars_ = vars_ or variables(mc)
    n = len(vars_)
    nonfaces = minimal_nonfaces(mc, vars_)
    binomials = []
    for s in mc.K.maximal_cells:
        cell_vars = [v for v in vars_ if mc.K.leq(v.degree.cell, s)]
        found = _cell_binomials(mc, vars_, s, D)
        if len(cell_vars) > mc.d(s) and not found:
            raise PresentationError(
                f"degree bound {D} is too small to express any relation of the semigroup of {s!r}")
        for b in found:
            if b not in binomials:
                binomials.append(b)

    monos = []
    for H in nonfaces:
        e = [0] * n
        for i in H:
            e[i] = 1
        monos.append(tuple(e))
    gens = [("binomial", u, v) for u, v in binomials] + [("monomial", m) for m in monos]
    # greedy removal of generators implied by the others, trying monomials first (lexicographically largest
    # first) and then binomials
    order = sorted(range(len(gens)), key=lambda k: (gens[k][0] == "binomial", tuple(-x for x in gens[k][1])))
    keep = set(range(len(gens)))
    for k in order:
        rest = [gens[j] for j in keep if j != k]
        top = max(sum(gens[k][1]), sum(gens[k][2]) if gens[k][0] == "binomial" else 0)
        R = _reducer_for(n, max(D, top), rest)
        g = gens[k]
        implied = R.is_zero(g[1]) if g[0] == "monomial" else R.equivalent(g[1], g[2])
        if implied:
            keep.discard(k)
    minimal = [gens[k] for k in sorted(keep, key=lambda k: (gens[k][0] == "monomial", sum(gens[k][1]), gens[k][1]))]

    pres = Presentation(vars_, nonfaces, binomials, D, minimal)
    pres.certificate = certify(mc, pres)
    return pres


def certify(mc: MonoidalComplex, pres: Presentation) -> dict:
    """Compare ``S/I`` with ``k[M]`` degree by degree through the bound; raise on any mismatch."""
    R = pres.reducer
    vars_ = pres.variables
    for cls in R.classes():
        degs = {evaluate(mc, vars_, m) for m in cls}
        if len(degs) != 1 or None in degs:
            raise PresentationError(f"a class of monomials maps to several degrees or to zero: {cls[:3]}")
    per_degree = {}
    for d in range(pres.degree_bound + 1):
        images = {}
        for i, m in enumerate(R.mons):
            if sum(m) > d:
                continue
            img = evaluate(mc, vars_, m)
            zero = R.is_zero(m)
            if zero and img is not None:
                raise PresentationError(f"{_mono_str(vars_, m)} is killed but t^{img} is nonzero")
            if not zero and img is None:
                raise PresentationError(f"{_mono_str(vars_, m)} maps to zero but is not in the emitted ideal")
            if img is not None:
                images.setdefault(img, set()).add(R.root[i])
        split = [a for a, roots in images.items() if len(roots) > 1]
        if split:
            raise PresentationError(f"degree {split[0]} is hit by {len(images[split[0]])} inequivalent monomials")
        expected = set(mc.enumerate_degrees(d))
        if set(images) != expected:
            raise PresentationError(f"degrees reached by monomials of degree <= {d} differ from the semigroup count")
        per_degree[d] = len(images)
    return {"degree_bound": pres.degree_bound, "classes_per_degree": per_degree, "passed": True}
