import random

import pytest

from conftest import loaded
from toricface.cells import EMPTY, synthesize_incidence, validate_complex
from toricface.linalg import Field
from toricface.squarefree import (
    SquarefreeError,
    SquarefreeModule,
    cohomology_dims_table,
    complex_from_module,
    dd_functor,
    direct_sum,
    face_module,
    free_module,
    hom_dimension,
    ishida_complex,
    random_face_morphism,
    random_squarefree_module,
    same_complex,
    shift,
    sq_cohomology,
)

QQ = Field.rationals()


def test_face_module_support(moebius):
    M = face_module(moebius.K, "A", QQ)
    assert {c for c, n in M.dims.items() if n} == set(moebius.K.below("A"))
    assert M.total_dim() == 10


def test_non_commuting_transitions_are_rejected():
    K = validate_complex({EMPTY: -1, "a": 0, "b": 0, "ab": 1},
                         [("a", EMPTY), ("b", EMPTY), ("ab", "a"), ("ab", "b")])
    one, minus = QQ.eye(1), QQ.scalar(-1)
    dims = {c: 1 for c in K.cells}
    good = {("a", EMPTY): one, ("b", EMPTY): one, ("ab", "a"): one, ("ab", "b"): one}
    SquarefreeModule(K, QQ, dims, good)
    bad = dict(good)
    bad[("b", EMPTY)] = minus
    with pytest.raises(SquarefreeError):
        SquarefreeModule(K, QQ, dims, bad)


def test_hom_dimensions(moebius):
    K = moebius.K
    assert hom_dimension(face_module(K, "A", QQ), face_module(K, "x", QQ)) == 1
    assert hom_dimension(face_module(K, "x", QQ), face_module(K, "A", QQ)) == 0
    assert hom_dimension(free_module(K, QQ), free_module(K, QQ)) == 1
    two = direct_sum([face_module(K, "A", QQ), face_module(K, "B", QQ)])
    assert hom_dimension(two, face_module(K, "y", QQ)) == 2


@pytest.mark.parametrize("name", ["circle4", "moebius", "wedge_triangles"])
def test_kernel_image_cokernel_dimensions(name):
    K = loaded(name).K
    rng = random.Random(len(name))
    for F in (QQ, Field.prime(2)):
        for _ in range(5):
            f = random_face_morphism(K, F, rng, 3, 2)
            ker, im, coker = f.kernel(), f.image(), f.cokernel()
            for c in K.cells:
                assert ker.dims[c] + im.dims[c] == f.source.dims[c]
                assert im.dims[c] + coker.dims[c] == f.target.dims[c]


@pytest.mark.parametrize("name", ["interval", "circle4", "moebius", "cube_fan", "rp2_6vertex"])
def test_cohomology_modules_match_cellwise_ranks(name):
    K = loaded(name).K
    eps = synthesize_incidence(K)
    for F in (QQ, Field.prime(2)):
        I = ishida_complex(K, eps, F)
        table = cohomology_dims_table(I)
        H = sq_cohomology(I)
        for i, M in H.items():
            assert M.dims == table[i]


def test_ishida_terms(moebius):
    eps = synthesize_incidence(moebius.K)
    I = ishida_complex(moebius.K, eps, QQ)
    assert I.indices() == [-3, -2, -1, 0]
    assert I.terms[0].dims == {c: int(c == EMPTY) for c in moebius.K.cells}
    # I^{-3} is the sum of k[s] over the three squares
    assert I.terms[-3].dims["x"] == 2 and I.terms[-3].dims["A"] == 1


@pytest.mark.parametrize("name", ["point", "circle4", "moebius", "cube_fan"])
def test_dual_of_ring_is_ishida_complex(name):
    K = loaded(name).K
    eps = synthesize_incidence(K)
    for F in (QQ, Field.prime(3)):
        D = dd_functor(complex_from_module(free_module(K, F)), eps)
        assert same_complex(D, ishida_complex(K, eps, F))


@pytest.mark.parametrize("name", ["interval", "circle4", "moebius"])
def test_double_dual_over_finite_fields(name):
    K = loaded(name).K
    eps = synthesize_incidence(K)
    rng = random.Random(7)
    for F in (Field.prime(2), Field.prime(5)):
        for _ in range(5):
            X = complex_from_module(random_squarefree_module(K, F, rng))
            DD = dd_functor(dd_functor(X, eps), eps)
            got = {(i, c): n for i, row in cohomology_dims_table(DD).items() for c, n in row.items() if n}
            want = {(i, c): n for i, row in cohomology_dims_table(X).items() for c, n in row.items() if n}
            assert got == want


def test_shift_moves_cohomology(moebius):
    eps = synthesize_incidence(moebius.K)
    I = ishida_complex(moebius.K, eps, QQ)
    J = shift(I, 2)
    assert J.indices() == [i - 2 for i in I.indices()]
    assert cohomology_dims_table(J)[-5] == cohomology_dims_table(I)[-3]
