"""JSON input documents, builtin fixtures, and (de)serialization."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema

from .cells import EMPTY, CellComplex, CellComplexError, Diagnostic, validate_complex
from .linalg import Field
from .monoidal import MonoidalComplex, from_vertex_rays, import_fan, import_simplicial, \
    validate_monoidal

_int_vec = {"type": "array", "items": {"type": "integer"}}
_int_mat = {"type": "array", "items": _int_vec}

SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "field": {
            "oneOf": [
                {"enum": ["rationals"]},
                {"type": "object", "properties": {"prime": {"type": "integer", "minimum": 2}},
                 "required": ["prime"], "additionalProperties": False},
            ]
        },
        "complex": {
            "type": "object",
            "properties": {
                "cells": {"type": "array", "items": {
                    "type": "object",
                    "properties": {"id": {"type": "string"}, "dim": {"type": "integer", "minimum": -1}},
                    "required": ["id", "dim"], "additionalProperties": False}},
                "coverings": {"type": "array", "items": {
                    "type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}},
            },
            "required": ["cells", "coverings"],
            "additionalProperties": False,
        },
        "monoidal": {
            "type": "object",
            "properties": {
                "cells": {"type": "object", "additionalProperties": {
                    "type": "object",
                    "properties": {"generators": _int_mat, "cone": _int_mat},
                    "required": ["generators"], "additionalProperties": False}},
                "gluings": {"type": "array", "items": {
                    "type": "object",
                    "properties": {"upper": {"type": "string"}, "lower": {"type": "string"}, "matrix": _int_mat},
                    "required": ["upper", "lower", "matrix"], "additionalProperties": False}},
            },
            "required": ["cells", "gluings"],
            "additionalProperties": False,
        },
        "labels": {"type": "object", "additionalProperties": {"type": "string"}},
        "simplicial": {
            "type": "object",
            "properties": {"facets": {"type": "array", "items": {
                "type": "array", "items": {"type": ["integer", "string"]}}}},
            "required": ["facets"], "additionalProperties": False,
        },
        "fan": {
            "type": "object",
            "properties": {"ambient_dim": {"type": "integer", "minimum": 0},
                           "cones": {"type": "array", "items": _int_mat}},
            "required": ["ambient_dim", "cones"], "additionalProperties": False,
        },
        "options": {
            "type": "object",
            "properties": {
                "degree_bound": {"type": "integer", "minimum": 0},
                "enumeration_cap": {"type": "integer", "minimum": 1},
                "oracle_bound": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "oneOf": [
        {"required": ["complex"], "not": {"anyOf": [{"required": ["simplicial"]}, {"required": ["fan"]}]}},
        {"required": ["simplicial"], "not": {"anyOf": [{"required": ["complex"]}, {"required": ["fan"]},
                                                        {"required": ["monoidal"]}]}},
        {"required": ["fan"], "not": {"anyOf": [{"required": ["complex"]}, {"required": ["simplicial"]},
                                                 {"required": ["monoidal"]}]}},
    ],
    "additionalProperties": False,
}


class DocumentError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{d['pointer']}: {d['message']}" for d in self.diagnostics))


def schema_errors(doc) -> list:
    """Schema violations as ``{"kind", "pointer", "message"}`` records."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        out.append({"kind": "schema", "pointer": pointer, "message": err.message})
    return out


@dataclass
class Loaded:
    """A parsed document: field, options, and the validated objects it describes."""

    doc: dict
    field: Field
    K: CellComplex
    mc: MonoidalComplex | None
    options: dict
    warnings: list = dc_field(default_factory=list)


def _insert_bottom(doc, warnings):
    cx = doc["complex"]
    if any(c["dim"] == -1 for c in cx["cells"]):
        return doc
    ids = {c["id"] for c in cx["cells"]}
    bottom = EMPTY
    while bottom in ids:
        bottom += "'"
    cells = [{"id": bottom, "dim": -1}] + list(cx["cells"])
    coverings = [[c["id"], bottom] for c in cx["cells"] if c["dim"] == 0] + list(cx["coverings"])
    warnings.append(f"no empty cell given; inserted {bottom!r} below every vertex")
    doc = dict(doc)
    doc["complex"] = {"cells": cells, "coverings": coverings}
    return doc


def parse(doc: dict) -> Loaded:
    """Validate a document and build its cell complex and (if present) monoidal complex."""
    errs = schema_errors(doc)
    if errs:
        raise DocumentError(errs)
    warnings = []
    field = Field.parse(doc.get("field", "rationals"))
    options = dict(doc.get("options", {}))
    if "enumeration_cap" in options:
        os.environ["TFR_ENUM_CAP"] = str(options["enumeration_cap"])
    if "simplicial" in doc:
        facets = [list(f) for f in doc["simplicial"]["facets"]]
        mc = import_simplicial(facets)
        return Loaded(doc, field, mc.K, mc, options, warnings)
    if "fan" in doc:
        mc = import_fan(doc["fan"]["ambient_dim"], doc["fan"]["cones"])
        return Loaded(doc, field, mc.K, mc, options, warnings)
    doc = _insert_bottom(doc, warnings)
    cx = doc["complex"]
    dims = {}
    for c in cx["cells"]:
        if c["id"] in dims:
            raise CellComplexError([Diagnostic("duplicate-cell", f"cell id {c['id']!r} appears twice", (c["id"],))])
        dims[c["id"]] = c["dim"]
    K = validate_complex(dims, [tuple(p) for p in cx["coverings"]])
    mc = None
    if "monoidal" in doc:
        m = doc["monoidal"]
        gl = {(g["upper"], g["lower"]): g["matrix"] for g in m["gluings"]}
        mc = validate_monoidal(K, m["cells"], gl, labels=doc.get("labels"))
    return Loaded(doc, field, K, mc, options, warnings)


def load(source) -> Loaded:
    """Load from a builtin fixture name, a path, or an already-decoded document."""
    if isinstance(source, dict):
        return parse(source)
    if isinstance(source, str) and source in FIXTURES:
        return parse(builtin_fixture(source))
    with open(source) as fh:
        return parse(json.load(fh))


def serialize(loaded: Loaded) -> dict:
    """Canonical explicit document: complex, monoidal data, labels, field and options."""
    out = {"field": loaded.field.to_json(), "complex": loaded.K.to_json()}
    if loaded.doc.get("name"):
        out["name"] = loaded.doc["name"]
    if loaded.mc is not None:
        out["monoidal"] = loaded.mc.to_json()
        if loaded.mc.labels:
            out["labels"] = dict(loaded.mc.labels)
    if loaded.options:
        out["options"] = dict(loaded.options)
    return out


# -- fixtures ----------------------------------------------------------------

def _moebius_document():
    squares = {"A": ["x", "y", "v", "u"], "B": ["y", "z", "w", "v"], "C": ["x", "u", "z", "w"]}
    cells = [{"id": EMPTY, "dim": -1}] + [{"id": v, "dim": 0} for v in "xyzuvw"]
    coverings = [[v, EMPTY] for v in "xyzuvw"]
    edges = []
    for sq in squares.values():
        for i in range(4):
            e = "".join(sorted((sq[i], sq[(i + 1) % 4]), key="xyzuvw".index))
            if e not in edges:
                edges.append(e)
    for e in edges:
        cells.append({"id": e, "dim": 1})
        coverings += [[e, e[0]], [e, e[1]]]
    for name, sq in squares.items():
        cells.append({"id": name, "dim": 2})
        for i in range(4):
            coverings.append([name, "".join(sorted((sq[i], sq[(i + 1) % 4]), key="xyzuvw".index))])
    K = validate_complex({c["id"]: c["dim"] for c in cells}, [tuple(p) for p in coverings])
    unit_square = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    rays = {name: {v: unit_square[i] for i, v in enumerate(sq)} for name, sq in squares.items()}
    mc = from_vertex_rays(K, rays, labels={v: v for v in "xyzuvw"})
    loaded = Loaded({"name": "moebius"}, Field.rationals(), K, mc, {})
    return serialize(loaded)


def _cube_fan_document():
    cones = []
    for axis in range(3):
        for sign in (1, -1):
            others = [i for i in range(3) if i != axis]
            cone = []
            for a, b in ((1, 1), (1, -1), (-1, -1), (-1, 1)):
                v = [0, 0, 0]
                v[axis], v[others[0]], v[others[1]] = sign, a, b
                cone.append(v)
            cones.append(cone)
    return {"name": "cube_fan", "field": "rationals", "fan": {"ambient_dim": 3, "cones": cones}}


def _simplicial(name, facets):
    return {"name": name, "field": "rationals", "simplicial": {"facets": facets}}


FIXTURES = {
    "moebius": _moebius_document,
    "cube_fan": _cube_fan_document,
    "circle4": lambda: _simplicial("circle4", [[1, 2], [2, 3], [3, 4], [1, 4]]),
    "point": lambda: _simplicial("point", [[1]]),
    "interval": lambda: _simplicial("interval", [[1, 2]]),
    "wedge_triangles": lambda: _simplicial("wedge_triangles", [[1, 2, 3], [3, 4, 5]]),
    "rp2_6vertex": lambda: _simplicial("rp2_6vertex", [
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
        [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6]]),
}

_fixture_cache = {}


def builtin_fixture(name: str) -> dict:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    if name not in _fixture_cache:
        _fixture_cache[name] = FIXTURES[name]()
    return json.loads(json.dumps(_fixture_cache[name]))


def write_document(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
