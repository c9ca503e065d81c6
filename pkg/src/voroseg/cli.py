"""Command-line front end: cells, relevant vectors, dual sets, theorem checks.

Commands
    cell          H-representation (and vertices when d <= vcap) of a cell
    relevant      parity-class minima and facet normals
    dual-set      all free directions of a cell's facet normals
    check         run the segment-extension equivalence check for one e
    verify        tiling (parallelotope) verdict plus irreducibility
    catalog-list  named lattices
    report        per-lattice summary table (markdown + JSON)

All JSON payloads use exact rational strings; only the OFF export renders
decimals.  Exit code is nonzero when a check's report invariants fail.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import extension, jsonio, lattice, polytope
from .lattice import catalog, coset_minima, facet_normals


def _load_form(args) -> lattice.QuadForm:
    if getattr(args, "job", None):
        doc = json.loads(Path(args.job).read_text())
        if "catalogName" in doc:
            return catalog(doc["catalogName"], doc.get("n"))
        return jsonio.form_from_dict(doc["form"] if "form" in doc else doc)
    if args.form:
        return jsonio.form_from_dict(json.loads(Path(args.form).read_text()))
    if args.lattice:
        return catalog(args.lattice, args.n)
    raise SystemExit("one of --form/--lattice is required")


def _parse_csv_ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


def _parse_csv_rats(s: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in s.split(","))


def _emit(args, doc: dict, summary: str) -> None:
    print(summary)
    if getattr(args, "json", None):
        Path(args.json).write_text(jsonio.dumps(doc))
        print(f"wrote {args.json}")


def cmd_cell(args) -> int:
    a = _load_form(args)
    cs = coset_minima(a)
    normals = facet_normals(cs)
    h = polytope.build_cell(a, normals)
    doc: dict = {"form": jsonio.form_to_dict(a)}
    if a.dim <= args.vcap:
        v = polytope.enumerate_vertices(h, cap=args.vcap)
        belts = polytope.belts(v)
        doc["cell"] = jsonio.cell_to_dict(v, belts)
        lengths = sorted(b.length for b in belts)
        summary = (
            f"cell: dim {a.dim}, {len(v.facet_ids)} facets, "
            f"{len(v.vertices)} vertices, belt lengths {lengths}"
        )
        if args.off:
            if a.dim > 3:
                raise SystemExit("--off needs d <= 3")
            Path(args.off).write_text(jsonio.to_off(v))
            summary += f"; wrote OFF to {args.off}"
    else:
        doc["cell"] = jsonio.hrep_to_dict(h)
        doc["cell"]["note"] = f"dim {a.dim} above V-rep cap {args.vcap}: H-representation only"
        summary = f"cell: dim {a.dim}, {len(h.ineqs)} facets (H-rep only, above V-rep cap)"
        if args.off:
            raise SystemExit("--off needs vertices; dim above the V-rep cap")
    _emit(args, doc, summary)
    return 0


def cmd_relevant(args) -> int:
    a = _load_form(args)
    cs = coset_minima(a)
    doc = {"form": jsonio.form_to_dict(a), "contacts": jsonio.contacts_to_dict(cs)}
    summary = (
        f"relevant: dim {a.dim}, {len(cs.contact_vectors())} contact vectors, "
        f"{len(cs.facet_normals())} facet normals over {len(cs.classes)} classes"
    )
    _emit(args, doc, summary)
    return 0


def cmd_dual_set(args) -> int:
    a = _load_form(args)
    ds = extension.dual_set(facet_normals(coset_minima(a)))
    doc = {"form": jsonio.form_to_dict(a), "dual_set": jsonio.dual_set_to_dict(ds)}
    _emit(args, doc, f"dual-set: {len(ds.members)} members")
    return 0


def cmd_check(args) -> int:
    a = _load_form(args)
    e = args.e
    bs = args.b
    if getattr(args, "job", None):
        doc_in = json.loads(Path(args.job).read_text())
        e = e or tuple(int(Fraction(x)) for x in doc_in["e"])
        bs = bs or tuple(Fraction(x) for x in doc_in["b"])
    if e is None:
        raise SystemExit("check needs --e (or a --job file with an e entry)")
    bs = bs or (Fraction(1),)
    rep = extension.check_theorem(a, e, bs, cap=args.vcap)
    doc = {"form": jsonio.form_to_dict(a), "report": jsonio.report_to_dict(rep)}
    status = "ok" if rep.invariants_ok else "INVARIANT VIOLATION"
    summary = (
        f"check: e={list(e)} in_dual_set={rep.in_dual_set} "
        f"normalized={list(rep.normalized_e) if rep.normalized_e else None} "
        f"irreducible={rep.irreducible_input} theorem_silent={rep.theorem_silent} [{status}]"
    )
    _emit(args, doc, summary)
    return 0 if rep.invariants_ok else 1


def cmd_verify(args) -> int:
    a = _load_form(args)
    if a.dim > args.vcap:
        raise SystemExit(f"verify needs vertices; dim {a.dim} above V-rep cap {args.vcap}")
    v = polytope.voronoi_cell(a, cap=args.vcap)
    verdict = polytope.is_parallelotope(v)
    graph = polytope.irreducibility_graph(v) if verdict.ok else None
    doc = {
        "form": jsonio.form_to_dict(a),
        "parallelotope": jsonio.verdict_to_dict(verdict),
        "irreducible": graph.connected if graph else None,
        "facet_pairs": len(graph.pairs) if graph else None,
    }
    summary = (
        f"verify: parallelotope={verdict.ok} "
        f"irreducible={graph.connected if graph else 'n/a'}"
    )
    _emit(args, doc, summary)
    return 0 if verdict.ok else 1


def _parse_lattice_spec(spec: str) -> tuple[str, int | None]:
    if ":" in spec:
        name, _, n = spec.partition(":")
        return name, int(n)
    return spec, None


DEFAULT_REPORT = "Zn:2,Zn:3,An:2,An:3,An*:3,Dn:4"


def cmd_report(args) -> int:
    rows = []
    for spec in args.lattices.split(","):
        name, n = _parse_lattice_spec(spec.strip())
        a = catalog(name, n)
        cs = coset_minima(a)
        normals = facet_normals(cs)
        ds = extension.dual_set(normals)
        if a.dim <= args.vcap:
            cell = polytope.voronoi_cell(a, cap=args.vcap)
            irreducible: bool | str = polytope.irreducibility_graph(cell).connected
        else:
            irreducible = "n/a"
        sample = list(ds.members[0]) if ds.members else None
        rows.append(
            {
                "lattice": spec.strip(),
                "dim": a.dim,
                "facet_normals": len(normals),
                "contact_vectors": len(cs.contact_vectors()),
                "dual_set": len(ds.members),
                "irreducible": irreducible,
                "free_direction": sample,
            }
        )
    header = "| lattice | dim | facets | contacts | dual set | irreducible | free direction |"
    sep = "|---|---|---|---|---|---|---|"
    lines = [header, sep]
    for r in rows:
        free = r["free_direction"]
        lines.append(
            f"| {r['lattice']} | {r['dim']} | {r['facet_normals']} | "
            f"{r['contact_vectors']} | {r['dual_set']} | {r['irreducible']} | "
            f"{free if free is not None else 'none'} |"
        )
    md = "\n".join(lines)
    print(md)
    if args.json:
        Path(args.json).write_text(jsonio.dumps({"rows": rows}))
        print(f"wrote {args.json}")
    if args.md:
        Path(args.md).write_text(md + "\n")
        print(f"wrote {args.md}")
    return 0


def cmd_catalog_list(args) -> int:
    print("parametric: Zn (n>=1), An, An* (n>=1), Dn, Dn* (n>=3)")
    print("fixed: E6, E6* (dim 6), E7, E7* (dim 7), E8 (dim 8)")
    return 0


def _add_form_args(p: argparse.ArgumentParser, with_job: bool = False) -> None:
    p.add_argument("--form", help="path to a JSON form document {dim, gram}")
    p.add_argument("--lattice", help="catalog name, e.g. An, Dn, E6*")
    p.add_argument("--n", type=int, help="dimension for parametric catalog names")
    p.add_argument("--vcap", type=int, default=polytope.DEFAULT_VREP_CAP,
                   help="vertex-enumeration dimension cap (default 5)")
    p.add_argument("--json", help="write the full JSON document here")
    if with_job:
        p.add_argument("--job", help="JSON job file {form|catalogName, e, b}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="voroseg", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cell", help="cell of a form: facets, vertices, belts")
    _add_form_args(p)
    p.add_argument("--off", help="write an OFF file (d <= 3)")
    p.set_defaults(fn=cmd_cell)

    p = sub.add_parser("relevant", help="parity-class minima and facet normals")
    _add_form_args(p)
    p.set_defaults(fn=cmd_relevant)

    p = sub.add_parser("dual-set", help="free directions of the facet normals")
    _add_form_args(p)
    p.set_defaults(fn=cmd_dual_set)

    p = sub.add_parser("check", help="segment-extension equivalence check")
    _add_form_args(p, with_job=True)
    p.add_argument("--e", type=_parse_csv_ints, help="direction, e.g. 0,1")
    p.add_argument("--b", type=_parse_csv_rats, help="weights, e.g. 1/2,1,3")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify", help="parallelotope verdict and irreducibility")
    _add_form_args(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("catalog-list", help="list known lattice names")
    p.set_defaults(fn=cmd_catalog_list)

    p = sub.add_parser("report", help="summary table over catalog lattices")
    p.add_argument("--lattices", default=DEFAULT_REPORT,
                   help=f"comma list of specs like Dn:4 or E6* (default {DEFAULT_REPORT})")
    p.add_argument("--vcap", type=int, default=polytope.DEFAULT_VREP_CAP)
    p.add_argument("--json", help="write rows as JSON here")
    p.add_argument("--md", help="write the markdown table here")
    p.set_defaults(fn=cmd_report)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
