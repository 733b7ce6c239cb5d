import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import Matrix

from toricface.polyhedral import (
    LatticeBasis,
    NotFullDimensionalError,
    NotPointedError,
    cone_from_facets,
    cone_from_generators,
    hilbert_basis,
    localized_membership,
    membership,
    normality_check,
)

SQUARE = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def in_cone_by_subsets(v, gens):
    """Independent membership test in R^3 by Caratheodory and Cramer's rule.

    The generators span R^3, so ``v`` is in their cone iff some three
    independent generators write it with nonnegative coefficients.
    """
    for a, b, c in itertools.combinations(gens, 3):
        D = _det3(a, b, c)
        if D == 0:
            continue
        coeffs = (_det3(v, b, c), _det3(a, v, c), _det3(a, b, v))
        if all(x * D >= 0 for x in coeffs):
            return True
    return False


def test_orthant():
    C = cone_from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert sorted(C.facets) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert len(C.faces) == 8


def test_square_cone_faces():
    C = cone_from_generators(SQUARE)
    assert len(C.facets) == 4
    assert len(C.faces) == 10
    assert C.faces[0].dim == 0 and C.faces[-1].dim == 3
    assert sorted(f.dim for f in C.faces) == [0, 1, 1, 1, 1, 2, 2, 2, 2, 3]


def test_errors():
    with pytest.raises(NotPointedError):
        cone_from_generators([(1, 0), (-1, 0), (0, 1)])
    with pytest.raises(NotFullDimensionalError):
        cone_from_generators([(1, 0, 0), (0, 1, 0)])


def test_membership_modes():
    C = cone_from_generators(SQUARE)
    assert membership((1, 0, 1), C)
    assert not membership((1, 0, 1), C, "relint")
    assert membership((1, 1, 2), C, "relint")
    L = LatticeBasis.from_generators([(1, 0, 1), (0, 1, 1), (0, 0, 2)])
    assert not membership((1, 1, 1), C, "lattice", L)
    assert membership((1, 1, 2), C, "lattice", L)


def test_facets_round_trip():
    C = cone_from_generators(SQUARE)
    D = cone_from_facets(C.facets, 3)
    assert sorted(D.rays) == sorted(C.rays)


gen3 = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(1, 3)), min_size=3, max_size=6)


@settings(max_examples=30, deadline=None)
@given(gen3)
def test_double_description_against_brute_force(gens):
    assume(Matrix([list(g) for g in gens]).rank() == 3)
    C = cone_from_generators(gens)
    for f in C.facets:
        tight = [g for g in gens if sum(a * b for a, b in zip(f, g)) == 0]
        assert all(sum(a * b for a, b in zip(f, g)) >= 0 for g in gens)
        assert Matrix([list(g) for g in tight]).rank() == 2
    for v in itertools.product(range(-2, 3), range(-2, 3), range(0, 3)):
        assert C.contains(v) == in_cone_by_subsets(v, gens)


def test_lattice_basics():
    L = LatticeBasis.from_generators([(2, 0), (0, 2), (1, 1)])
    assert L.rank == 2
    assert L.contains((1, 1)) and not L.contains((1, 0))
    assert not L.is_saturated()
    assert L.saturation() == LatticeBasis.standard(2)
    assert L.primitive_on_ray((3, 3)) == (1, 1)
    assert L.primitive_on_ray((1, 0)) == (2, 0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4),
       st.permutations(range(4)))
def test_hnf_is_canonical(vectors, perm):
    assume(any(any(v) for v in vectors))
    L1 = LatticeBasis.from_generators(vectors, 3)
    shuffled = [vectors[i] for i in perm if i < len(vectors)]
    L2 = LatticeBasis.from_generators(shuffled + [tuple(a + b for a, b in zip(vectors[0], vectors[-1]))], 3)
    assert L1 == L2
    for v in vectors:
        assert L1.contains(v)


def test_normality_examples():
    assert normality_check([(1, 0), (0, 1)]).normal
    res = normality_check([(1, 0), (1, 2)], LatticeBasis.standard(2))
    assert not res.normal and res.witness == (1, 1)
    # in the lattice the two generators span, (1, 1) is not a lattice point and the semigroup is normal
    assert normality_check([(1, 0), (1, 2)]).normal
    assert normality_check(SQUARE).normal
    assert not normality_check([(1, 0, 0), (0, 1, 0), (1, 1, 2)], LatticeBasis.standard(3)).normal


def _unimodular(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(1, 3)), min_size=2, max_size=4),
       st.integers(-2, 2))
def test_normality_invariance(gens, shear):
    assume(Matrix([list(g) for g in gens]).rank() == 2)
    base = normality_check(gens, LatticeBasis.standard(2)).normal
    assert normality_check(list(reversed(gens)), LatticeBasis.standard(2)).normal == base
    M = [[1, shear], [0, 1]]
    moved = [_unimodular(M, g) for g in gens]
    assert normality_check(moved, LatticeBasis.standard(2)).normal == base


def test_hilbert_basis_small_cones():
    assert hilbert_basis(cone_from_generators([(1, 0), (1, 3)])) == [(1, 0), (1, 1), (1, 2), (1, 3)]
    assert hilbert_basis(cone_from_generators(SQUARE)) == sorted(SQUARE)
    assert len(hilbert_basis(cone_from_generators([(1, 1, 1), (1, -1, 1), (-1, -1, 1), (-1, 1, 1)]))) == 9


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=2, max_size=3))
def test_hilbert_basis_generates_and_is_irreducible(gens):
    assume(Matrix([list(g) for g in gens]).rank() == 2)
    C = cone_from_generators(gens)
    H = hilbert_basis(C)
    hs = set(H)
    # irreducible: no element is a sum of two nonzero cone points
    for h in H:
        for p in itertools.product(range(-9, 10), range(0, 10)):
            q = (h[0] - p[0], h[1] - p[1])
            if any(p) and any(q) and C.contains(p) and C.contains(q):
                pytest.fail(f"{h} = {p} + {q}")
    # generating: every lattice point of the cone in a window is an N-combination
    reach = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        v = frontier.pop()
        for h in hs:
            w = (v[0] + h[0], v[1] + h[1])
            if abs(w[0]) <= 8 and w[1] <= 8 and w not in reach:
                reach.add(w)
                frontier.append(w)
    for p in itertools.product(range(-4, 5), range(0, 5)):
        if C.contains(p):
            assert p in reach


def test_localized_membership():
    C = cone_from_generators(SQUARE)
    Z3 = LatticeBasis.standard(3)
    ray = C.face_spanned_by([(0, 0, 1)])
    # (1, 0, -1) = (1, 0, 1) - 2 (0, 0, 1) lies in C + R(0, 0, 1)
    assert localized_membership((1, 0, -1), C, ray, Z3)
    assert not localized_membership((-1, 0, 0), C, ray, Z3)
    assert localized_membership((-5, -5, -5), C, C.faces[-1], Z3)
    apex = C.faces[0]
    assert not localized_membership((1, 0, -1), C, apex, Z3)
    assert localized_membership((1, 0, 1), C, apex, Z3)
    L = LatticeBasis.from_generators([(1, 0, 1), (0, 1, 1), (0, 0, 2)])
    assert not localized_membership((1, 1, 1), C, C.faces[-1], L)


def test_rational_coordinates_are_exact():
    L = LatticeBasis.from_generators([(3, 0), (0, 5)])
    assert L.coordinates((1, 1)) == [Fraction(1, 3), Fraction(1, 5)]
