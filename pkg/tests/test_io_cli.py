import json
import shutil
import subprocess

import pytest

from toricface.cli import main
from toricface.io import FIXTURES, DocumentError, builtin_fixture, parse, schema_errors, serialize

SQUARE_NO_BOTTOM = {
    "complex": {
        "cells": [{"id": v, "dim": 0} for v in "abcd"] + [{"id": e, "dim": 1} for e in ["ab", "bc", "cd", "da"]],
        "coverings": [[e, e[0]] for e in ["ab", "bc", "cd", "da"]] + [[e, e[1]] for e in ["ab", "bc", "cd", "da"]],
    }
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_schema_errors_carry_json_pointers():
    errs = schema_errors({"complex": {"cells": [{"id": "a", "dim": "zero"}], "coverings": []}})
    assert [e["pointer"] for e in errs] == ["/complex/cells/0/dim"]
    errs = schema_errors({"field": {"prime": 1}, "simplicial": {"facets": [[1]]}})
    assert errs[0]["pointer"] == "/field"


def test_exactly_one_stanza():
    both = {"simplicial": {"facets": [[1]]}, "fan": {"ambient_dim": 1, "cones": [[[1]]]}}
    assert schema_errors(both)
    assert schema_errors({"field": "rationals"})
    with pytest.raises(DocumentError):
        parse(both)


def test_missing_bottom_is_inserted_with_warning():
    loaded = parse(json.loads(json.dumps(SQUARE_NO_BOTTOM)))
    assert loaded.warnings and "inserted" in loaded.warnings[0]
    assert loaded.K.bottom == "∅"
    assert loaded.K.dimension == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_round_trip_is_idempotent(name):
    once = serialize(parse(builtin_fixture(name)))
    twice = serialize(parse(json.loads(json.dumps(once))))
    assert once == twice


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_every_fixture_validates(capsys, name):
    code, out, _ = run(capsys, "validate", name, "--json")
    data = json.loads(out)
    assert code == 0 and data["valid"]


def test_fixture_sizes():
    assert len(parse(builtin_fixture("point")).K.nonempty_cells) == 1
    assert len(parse(builtin_fixture("rp2_6vertex")).K.nonempty_cells) == 31
    assert len(parse(builtin_fixture("wedge_triangles")).K.nonempty_cells) == 13
    with pytest.raises(KeyError):
        builtin_fixture("torus")


def test_validate_file_paths(capsys, tmp_path):
    good = tmp_path / "moebius.json"
    good.write_text(json.dumps(builtin_fixture("moebius")))
    assert run(capsys, "validate", str(good))[0] == 0

    fan = tmp_path / "fan.json"
    fan.write_text(json.dumps({"fan": {"ambient_dim": 2, "cones": [[[1, 0], [0, 1]], [[1, 1], [0, 1]]]}}))
    code, out, _ = run(capsys, "validate", str(fan), "--json")
    assert code == 1
    assert "not-a-fan" in {d["kind"] for d in json.loads(out)["diagnostics"]}

    nob = tmp_path / "square.json"
    nob.write_text(json.dumps(SQUARE_NO_BOTTOM))
    code, out, err = run(capsys, "validate", str(nob))
    assert code == 0 and "inserted" in err

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"complex": {"cells": [{"id": 3, "dim": 0}], "coverings": []}}))
    code, out, _ = run(capsys, "validate", str(bad), "--json")
    assert code == 1
    assert json.loads(out)["diagnostics"][0]["pointer"] == "/complex/cells/0/id"

    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 1


def test_report_props_cube(capsys):
    code, out, _ = run(capsys, "report", "cube_fan", "--props", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["cohomology"]["gorenstein_star"] is True
    assert data["epsilon_convention"] == "eps(v, empty) = +1"


def test_report_oracle_check_text(capsys):
    code, out, _ = run(capsys, "report", "circle4", "--oracle-check", "2")
    assert code == 0
    assert "all agreements" in out and "25 degrees, 75 comparisons" in out


def test_report_field_override(capsys):
    code, out, _ = run(capsys, "report", "rp2_6vertex", "--props", "--field", "F2", "--json")
    data = json.loads(out)
    assert data["field"] == {"prime": 2}
    assert data["cohomology"]["cohen_macaulay"] is False


def test_report_duality_check(capsys):
    code, out, _ = run(capsys, "report", "interval", "--duality-check", "3", "--json")
    assert json.loads(out)["duality_check"]["passed"]


def test_cohomology_flag_omits_verdicts(capsys):
    code, out, _ = run(capsys, "report", "circle4", "--cohomology", "--json")
    data = json.loads(out)["cohomology"]
    assert "local_cohomology" in data and "buchsbaum" not in data


def test_report_on_non_normal_document(capsys, tmp_path):
    doc = {
        "complex": {"cells": [{"id": "∅", "dim": -1}, {"id": "p", "dim": 0}], "coverings": [["p", "∅"]]},
        "monoidal": {"cells": {"p": {"generators": [[2], [3]]}}, "gluings": []},
    }
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "report", str(path), "--props")
    assert code == 2 and "not normal" in err


def test_fixture_command(capsys):
    code, out, _ = run(capsys, "fixture", "point")
    assert code == 0 and json.loads(out)["simplicial"]["facets"] == [[1]]


@pytest.mark.skipif(shutil.which("tfr") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["tfr", "report", "moebius", "--ideal", "3"], capture_output=True, text=True, check=True)
    assert "X_uX_vX_w" in res.stdout
