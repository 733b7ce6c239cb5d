import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from toricface.cells import (
    EMPTY,
    CellComplexError,
    ConstantCoefficients,
    cellular_complex,
    cohomology,
    cohomology_dims,
    diagnose_complex,
    incidence_gauge_basis,
    reduced_cohomology,
    sphere_report,
    synthesize_incidence,
    validate_complex,
)
from toricface.linalg import Field
from toricface.monoidal import import_simplicial


def square_boundary():
    dims = {EMPTY: -1, "a": 0, "b": 0, "c": 0, "d": 0, "ab": 1, "bc": 1, "cd": 1, "da": 1}
    cov = [(v, EMPTY) for v in "abcd"]
    for e in ["ab", "bc", "cd", "da"]:
        cov += [(e, e[0]), (e, e[1])]
    return validate_complex(dims, cov)


def kinds(dims, cov):
    return {d.kind for d in diagnose_complex(dims, cov)}


def test_square_boundary_is_valid():
    K = square_boundary()
    assert K.dimension == 1
    assert len(K.cells) == 9
    assert K.join("a", "b") == "ab"
    assert K.join("a", "c") is None
    assert K.meet("ab", "bc") == "b"
    assert all(sphere_report(K).values())


def test_missing_bottom_and_grading_are_reported():
    assert "missing-bottom" in kinds({"a": 0, "b": 0, "ab": 1}, [("ab", "a"), ("ab", "b")])
    bad = {EMPTY: -1, "a": 0, "b": 0, "ab": 2}
    assert "grading" in kinds(bad, [("a", EMPTY), ("b", EMPTY), ("ab", "a"), ("ab", "b")])


def test_diamond_violation():
    # an edge with a single vertex: the interval [empty, edge] is not a diamond
    dims = {EMPTY: -1, "a": 0, "e": 1}
    assert "diamond" in kinds(dims, [("a", EMPTY), ("e", "a")])


def test_intersection_property_violation():
    # two edges sharing both endpoints (a 2-gon) meet in two vertices
    dims = {EMPTY: -1, "a": 0, "b": 0, "e": 1, "f": 1}
    cov = [("a", EMPTY), ("b", EMPTY), ("e", "a"), ("e", "b"), ("f", "a"), ("f", "b")]
    assert "intersection" in kinds(dims, cov)
    with pytest.raises(CellComplexError):
        validate_complex(dims, cov)


def test_unknown_cell_and_duplicate_ids():
    assert "unknown-cell" in kinds({EMPTY: -1, "a": 0}, [("a", EMPTY), ("x", "a")])
    with pytest.raises(CellComplexError) as err:
        validate_complex([("a", 0), ("a", 0)], [])
    assert err.value.diagnostics[0].kind == "duplicate-cell"


def test_square_cohomology():
    K = square_boundary()
    eps = synthesize_incidence(K)
    F = Field.rationals()
    assert cohomology(K, F, eps) == {0: 1, 1: 1}
    assert reduced_cohomology(K, F, eps) == {-1: 0, 0: 0, 1: 1}
    # compact support on the open star of a vertex: a half-open pair of edges
    star = cohomology_dims(cellular_complex(K, eps, ConstantCoefficients(F), support="a"))
    assert star == {0: 0, 1: 1}


def test_incidence_normalization_and_gauge():
    K = square_boundary()
    eps = synthesize_incidence(K)
    assert all(eps(v, EMPTY) == 1 for v in K.vertices)
    assert not eps.violations()
    for flip in incidence_gauge_basis(K):
        assert not eps.flipped(flip).violations()


def test_single_sign_flip_breaks_the_boundary_relation():
    K = square_boundary()
    eps = synthesize_incidence(K)
    broken = eps.flipped([("ab", "a")])
    assert broken.violations()
    assert not cellular_complex(K, broken, ConstantCoefficients(Field.rationals()), augmented=True).check()


simplicial_facets = st.lists(
    st.lists(st.integers(1, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(simplicial_facets, st.sampled_from([0, 2, 3]))
def test_reduced_cohomology_matches_simplicial_oracle(facets, p):
    K = import_simplicial(facets).K
    F = Field.rationals() if p == 0 else Field.prime(p)
    got = reduced_cohomology(K, F)
    want = oracles.reduced_cohomology(oracles.closure(facets), p)
    for i in set(got) | set(want):
        assert got.get(i, 0) == want.get(i, 0)


@settings(max_examples=40, deadline=None)
@given(simplicial_facets)
def test_every_synthesized_incidence_squares_to_zero(facets):
    K = import_simplicial(facets).K
    eps = synthesize_incidence(K)
    assert not eps.violations()
    assert cellular_complex(K, eps, ConstantCoefficients(Field.prime(3)), augmented=True).check()


def test_euler_characteristic_of_random_complexes():
    rng = random.Random(1)
    for _ in range(10):
        facets = [rng.sample(range(1, 7), rng.randint(1, 3)) for _ in range(4)]
        K = import_simplicial(facets).K
        C = cellular_complex(K, synthesize_incidence(K), ConstantCoefficients(Field.rationals()))
        h = cohomology_dims(C)
        assert C.euler_characteristic() == sum((-1) ** i * n for i, n in h.items())
