"""Command line interface: ``tfr validate | report | fixture``."""

from __future__ import annotations

import argparse
import json
import sys

from .cells import CellComplexError, IncidenceError, sphere_report, synthesize_incidence
from .cohomology import NotNormalError, oracle_sweep, ring_properties
from .io import FIXTURES, DocumentError, builtin_fixture, load
from .linalg import Field
from .monoidal import MonoidalError
from .polyhedral import EnumerationCapError
from .presentation import PresentationError, present_ideal
from .squarefree import duality_check


def _diagnostics(exc) -> list:
    if isinstance(exc, DocumentError):
        return exc.diagnostics
    if isinstance(exc, (CellComplexError, MonoidalError)):
        return [d.to_json() for d in exc.diagnostics]
    if isinstance(exc, IncidenceError):
        return [{"kind": "incidence", "message": str(exc), "cells": [list(x) for x in exc.diamonds]}]
    return [{"kind": type(exc).__name__, "message": str(exc)}]


def _load(source):
    try:
        return load(source), None
    except FileNotFoundError:
        return None, [{"kind": "io", "message": f"no such file or fixture: {source}"}]
    except json.JSONDecodeError as exc:
        return None, [{"kind": "json", "message": str(exc)}]
    except (DocumentError, CellComplexError, MonoidalError, IncidenceError, ValueError) as exc:
        return None, _diagnostics(exc)


def cmd_validate(args) -> int:
    loaded, diags = _load(args.input)
    out = {"valid": loaded is not None, "diagnostics": diags or []}
    if loaded is not None:
        K = loaded.K
        out["warnings"] = loaded.warnings
        out["cells"] = len(K.cells)
        out["dimension"] = K.dimension
        try:
            synthesize_incidence(K)
            out["incidence"] = "ok"
        except IncidenceError as exc:
            out["valid"] = False
            out["diagnostics"] += _diagnostics(exc)
        spheres = sphere_report(K, loaded.field)
        bad = sorted(c for c, ok in spheres.items() if not ok)
        if bad:
            out["warnings"].append(f"cell boundaries without sphere homology: {bad}")
        if loaded.mc is not None:
            out["monoidal"] = True
            out["not_normal"] = sorted(c for c, ok in loaded.mc.normal.items() if not ok)
    if args.json:
        print(json.dumps(out, indent=2, ensure_ascii=False))
    else:
        for w in out.get("warnings", []):
            print(f"warning: {w}", file=sys.stderr)
        if out["valid"]:
            print(f"valid: {out['cells']} cells, dimension {out['dimension']}")
        else:
            print("invalid")
            for d in out["diagnostics"]:
                where = d.get("pointer") or ", ".join(map(str, d.get("cells", [])))
                print(f"  {d['kind']}: {d['message']}" + (f" [{where}]" if where else ""))
    return 0 if out["valid"] else 1


def cmd_report(args) -> int:
    loaded, diags = _load(args.input)
    if loaded is None:
        print(json.dumps({"error": "invalid document", "diagnostics": diags}, indent=2), file=sys.stderr)
        return 1
    mc = loaded.mc
    if mc is None:
        print("error: the document has no monoidal data", file=sys.stderr)
        return 1
    field = Field.parse(args.field) if args.field else loaded.field
    eps = synthesize_incidence(mc.K)
    result = {"name": loaded.doc.get("name"), "field": field.to_json(), "dimension": mc.dimension,
              "epsilon_convention": "eps(v, empty) = +1"}
    text = [f"field: {field.name}   dim X = {mc.dimension}   epsilon convention: eps(v, empty) = +1"]
    try:
        D = args.ideal
        if D is not None:
            pres = present_ideal(mc, D)
            result["presentation"] = pres.to_json()
            text.append(f"presentation ideal (degree bound {D}):")
            text += [f"  {g}" for g in pres.generator_strings()]
            cert = pres.certificate
            text.append(f"certificate through degree {cert['degree_bound']}: "
                        f"{'passed' if cert['passed'] else 'FAILED'} {cert['classes_per_degree']}")
        if args.cohomology or args.props:
            rep = ring_properties(mc, field, eps)
            rj = rep.to_json()
            if not args.props:
                rj = {k: v for k, v in rj.items() if k not in ("buchsbaum", "cohen_macaulay", "gorenstein_star")}
            result["cohomology"] = rj
            text += rep.text().splitlines()[1:]
        if args.duality_check is not None:
            dc = duality_check(mc.K, eps, field, samples=args.duality_check)
            result["duality_check"] = dc
            text.append(f"duality check: {dc['samples']} random modules, "
                        f"{len(dc['failures'])} failures; D(R) equals the Ishida complex: "
                        f"{dc['dual_of_ring_is_ishida']}")
        B = args.oracle_check
        if B is not None:
            sw = oracle_sweep(mc, B, field, eps)
            result["oracle_check"] = {"bound": B, **sw}
            verdict = "all agreements" if sw["agree"] else f"{len(sw['mismatches'])} mismatches"
            text.append(f"oracle check up to generator length {B}: {verdict} "
                        f"({sw['degrees']} degrees, {sw['comparisons']} comparisons)")
    except (EnumerationCapError, NotNormalError, PresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(result, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text))
    return 0


def cmd_fixture(args) -> int:
    try:
        doc = builtin_fixture(args.name)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    print(json.dumps(doc, indent=2, ensure_ascii=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfr", description="Toric face rings of monoidal complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a document and print diagnostics")
    v.add_argument("input", help="JSON file or builtin fixture name")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("report", help="presentation, cohomology and ring properties")
    r.add_argument("input", help="JSON file or builtin fixture name")
    r.add_argument("--ideal", type=int, metavar="D", help="present the ideal and certify through degree D")
    r.add_argument("--cohomology", action="store_true", help="local and cellular cohomology tables")
    r.add_argument("--props", action="store_true", help="Buchsbaum / Cohen-Macaulay / Gorenstein* verdicts")
    r.add_argument("--duality-check", type=int, nargs="?", const=5, metavar="N",
                   help="check the duality involution on N random modules (default 5)")
    r.add_argument("--oracle-check", type=int, metavar="B", help="compare with the Cech oracle up to length B")
    r.add_argument("--field", help="override the field: rationals, or a prime such as 2 or F3")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_report)

    f = sub.add_parser("fixture", help="print a builtin fixture document")
    f.add_argument("name", choices=sorted(FIXTURES))
    f.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
