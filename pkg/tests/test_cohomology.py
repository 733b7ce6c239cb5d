import json

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import loaded
from toricface.cells import synthesize_incidence
from toricface.cohomology import (
    CechOracle,
    cech_survivors,
    local_cohomology_dim,
    oracle_sweep,
    ring_properties,
    sweep_degrees,
)
from toricface.linalg import Field
from toricface.monoidal import Degree, import_simplicial
from toricface.squarefree import free_module

FIELDS = {0: Field.rationals(), 2: Field.prime(2), 3: Field.prime(3)}

facet_lists = st.lists(st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True), min_size=1, max_size=5)


def sid(F):
    return ",".join(str(v) for v in sorted(F)) if F else "∅"


@settings(max_examples=25, deadline=None)
@given(facet_lists, st.sampled_from([0, 2, 3]))
def test_local_cohomology_matches_hochster(facets, p):
    mc = import_simplicial(facets)
    F = FIELDS[p]
    eps = synthesize_incidence(mc.K)
    R = free_module(mc.K, F)
    faces = oracles.closure(facets)
    oracle = CechOracle(mc, eps, F)
    for face in faces:
        b = Degree(sid(face), tuple(-1 for _ in face))
        for i in range(0, mc.dimension + 2):
            want = oracles.hochster_local_cohomology(faces, i, face, p)
            assert local_cohomology_dim(R, i, b, mc, eps) == want
            assert oracle(i, b) == want


def _links_vanish_below(faces, d, p, include_empty):
    for F in faces:
        if not F and not include_empty:
            continue
        h = oracles.reduced_cohomology(oracles.link(faces, F), p)
        if any(n for i, n in h.items() if i < d - len(F)):
            return False
    return True


def _is_homology_sphere(faces, d, p):
    for F in faces:
        h = oracles.reduced_cohomology(oracles.link(faces, F), p)
        if {i: n for i, n in h.items() if n} != {d - len(F): 1}:
            return False
    return True


@settings(max_examples=30, deadline=None)
@given(facet_lists, st.sampled_from([0, 2]))
def test_verdicts_match_link_conditions(facets, p):
    mc = import_simplicial(facets)
    faces = oracles.closure(facets)
    d = max(len(f) for f in faces) - 1
    rep = ring_properties(mc, FIELDS[p])
    assert rep.buchsbaum == _links_vanish_below(faces, d, p, include_empty=False)
    assert rep.cohen_macaulay == _links_vanish_below(faces, d, p, include_empty=True)
    assert rep.gorenstein_star == _is_homology_sphere(faces, d, p)


@pytest.mark.parametrize("name, buchsbaum, cm, gor", [
    ("point", True, True, False),
    ("interval", True, True, False),
    ("circle4", True, True, True),
    ("wedge_triangles", False, False, False),
    ("moebius", True, False, False),
    ("cube_fan", True, True, True),
])
def test_fixture_verdicts(name, buchsbaum, cm, gor):
    rep = ring_properties(loaded(name).mc)
    assert (rep.buchsbaum, rep.cohen_macaulay, rep.gorenstein_star) == (buchsbaum, cm, gor)


def test_two_points_are_gorenstein_star():
    assert ring_properties(import_simplicial([[1], [2]])).gorenstein_star


def test_positive_degrees_have_no_local_cohomology(moebius):
    eps = synthesize_incidence(moebius.K)
    R = free_module(moebius.K, Field.rationals())
    oracle = CechOracle(moebius, eps, Field.rationals())
    for a in list(moebius.enumerate_degrees(2))[1:]:
        for i in range(4):
            assert local_cohomology_dim(R, i, a, moebius, eps) == 0
            assert oracle(i, a) == 0


def test_cech_survivors_at_zero_are_all_cells(moebius):
    assert cech_survivors(moebius, moebius.zero()) == frozenset(moebius.K.cells)


def test_sweep_shape(moebius):
    degs = sweep_degrees(moebius, 1)
    assert len(degs) == 1 + 2 * 6
    res = oracle_sweep(moebius, 1)
    assert res["agree"] and res["comparisons"] == 13 * 4


def test_moebius_canonical_module_is_twisted_over_odd_characteristic(moebius):
    q = ring_properties(moebius, Field.rationals())
    f2 = ring_properties(moebius, Field.prime(2))
    assert sorted(q.canonical_ideal_names) == sorted(f2.canonical_ideal_names)
    assert q.canonical_ideal_isomorphic is False
    assert f2.canonical_ideal_isomorphic is True
    support = {c for c, n in q.canonical_module.dims.items() if n}
    assert support == {"A", "B", "C", "xu", "yv", "zw"}


def test_report_serializes(moebius):
    rep = ring_properties(moebius)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["buchsbaum"] is True and data["field"] == "rationals"
    assert "eps(v, empty) = +1" in rep.text()
