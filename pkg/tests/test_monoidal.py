import pytest
from hypothesis import given, settings, strategies as st

from conftest import loaded
from toricface.cells import EMPTY, validate_complex
from toricface.cohomology import NotNormalError, ring_properties
from toricface.monoidal import Degree, MonoidalError, import_fan, import_simplicial, validate_monoidal
from toricface.polyhedral import EnumerationCapError


def edge_complex():
    return validate_complex({EMPTY: -1, "1": 0, "2": 0, "1,2": 1},
                            [("1", EMPTY), ("2", EMPTY), ("1,2", "1"), ("1,2", "2")])


UNIT = {"1": {"generators": [[1]]}, "2": {"generators": [[1]]}, "1,2": {"generators": [[1, 0], [0, 1]]}}


def kinds(cells, gluings, **kw):
    with pytest.raises(MonoidalError) as err:
        validate_monoidal(edge_complex(), cells, gluings, **kw)
    return {d.kind for d in err.value.diagnostics}


def vertex(mc, name):
    return next(g for g in mc.generator_degrees if g.cell == name)


def test_edge_is_valid():
    mc = validate_monoidal(edge_complex(), UNIT, {("1,2", "1"): [[1], [0]], ("1,2", "2"): [[0], [1]]})
    assert mc.cone_wise_normal
    assert len(mc.generator_degrees) == 2


@pytest.mark.parametrize("gluings, kind", [
    ({("1,2", "1"): [[0], [0]], ("1,2", "2"): [[0], [1]]}, "gluing-not-injective"),
    ({("1,2", "1"): [[1], [0]], ("1,2", "2"): [[1], [0]]}, "face-correspondence"),
    ({("1,2", "1"): [[1], [1]], ("1,2", "2"): [[0], [1]]}, "face-correspondence"),
    ({("1,2", "1"): [[2], [0]], ("1,2", "2"): [[0], [1]]}, "semigroup-restriction"),
    ({("1,2", "1"): [[1], [0]]}, "gluing-missing"),
])
def test_gluing_diagnostics(gluings, kind):
    assert kind in kinds(UNIT, gluings)


def test_non_normal_cells_are_flagged():
    cells = {"1": {"generators": [[2], [3]]}, "2": {"generators": [[1]]},
             "1,2": {"generators": [[2, 0], [3, 0], [0, 1]]}}
    gl = {("1,2", "1"): [[1], [0]], ("1,2", "2"): [[0], [1]]}
    mc = validate_monoidal(edge_complex(), cells, gl)
    assert mc.normal == {EMPTY: True, "1": False, "2": True, "1,2": False}
    assert "not-normal" in kinds(cells, gl, require_normal=True)
    with pytest.raises(NotNormalError):
        ring_properties(mc)


def test_overlapping_fan_is_rejected():
    with pytest.raises(MonoidalError) as err:
        import_fan(2, [[[1, 0], [0, 1]], [[1, 1], [0, 1]]])
    assert "not-a-fan" in {d.kind for d in err.value.diagnostics}


def test_moebius_shape(moebius):
    assert len(moebius.K.cells) == 19
    assert len(moebius.K.nonempty_cells) == 18
    assert sorted(moebius.label(g.cell) for g in moebius.generator_degrees) == list("uvwxyz")
    assert moebius.dimension == 2


def test_moebius_degree_counts_match_closed_formula(moebius):
    # lattice points of height <= n over 6 vertices, 9 edges and 3 unit squares, plus zero
    def count(n):
        return 1 + 6 * n + 9 * sum(h - 1 for h in range(1, n + 1)) + 3 * sum((h - 1) ** 2 for h in range(1, n + 1))
    degs = moebius.enumerate_degrees(4)
    for n in range(5):
        assert sum(1 for k in degs.values() if k <= n) == count(n)


def test_moebius_arithmetic(moebius):
    x, y, z, u, v, w = (vertex(moebius, c) for c in "xyzuvw")
    assert moebius.add_degrees(x, v) == moebius.add_degrees(u, y)
    assert moebius.add_degrees(x, v).cell == "A"
    # u + v lies on the edge uv, which only square A contains, and w is not a vertex of A
    uv = moebius.add_degrees(u, v)
    assert uv.cell == "uv"
    assert moebius.add_degrees(uv, w) is None
    assert moebius.add_degrees(x, moebius.add_degrees(y, z)) is None
    assert moebius.supp("A", (1, 1, 2)) == Degree("A", (1, 1, 2))
    assert moebius.supp("A", (0, 0, 1)).cell in "xyzuvw"
    assert moebius.add_degrees(moebius.zero(), x) == x


def test_enumeration_cap(moebius, monkeypatch):
    monkeypatch.setenv("TFR_ENUM_CAP", "20")
    with pytest.raises(EnumerationCapError):
        moebius.enumerate_degrees(2)


def test_simplicial_import():
    mc = import_simplicial([[1, 2, 3], [3, 4]])
    assert len(mc.K.nonempty_cells) == 7 + 2
    assert mc.dimension == 2
    assert mc.cone_wise_normal
    a = vertex(mc, "1")
    b = vertex(mc, "4")
    assert mc.add_degrees(a, b) is None


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_fan_sum_is_ambient_sum_when_defined(data):
    mc = loaded("cube_fan").mc
    gens = mc.generator_degrees
    a = data.draw(st.sampled_from(gens))
    b = data.draw(st.sampled_from(gens))
    c = mc.add_degrees(a, b)
    common = mc.K.join(a.cell, b.cell)
    assert (c is None) == (common is None)
    if c is not None:
        va, vb = mc.ambient_vector(a), mc.ambient_vector(b)
        assert mc.ambient_vector(c) == tuple(p + q for p, q in zip(va, vb))
        c2 = mc.add_degrees(c, a)
        if c2 is not None:
            assert mc.ambient_vector(c2) == tuple(2 * p + q for p, q in zip(va, vb))


def test_cube_fan_shape(cube):
    assert len(cube.K.nonempty_cells) == 26
    assert cube.dimension == 2
    assert len(cube.generator_degrees) == 8 + 12 + 6
