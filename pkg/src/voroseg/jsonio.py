"""JSON (rational strings) and OFF serialization.

Every coordinate and form value is rendered as an exact rational string
"p/q" (or "p" when the denominator is 1); counts and dimensions stay as
JSON numbers.  The OFF export is the single deliberately lossy surface:
display-only decimals at 12 significant digits.
"""

from __future__ import annotations

import functools
import json
from fractions import Fraction
from typing import Sequence

from . import linalg, polytope
from .extension import DualSet, ExtensionReport
from .lattice import ContactVectorSet, QuadForm, make_form
from .linalg import Vec
from .polytope import Belt, ParallelotopeVerdict, VPolytope


def rat(x) -> str:
    return str(Fraction(x))


def rat_vec(v: Sequence) -> list[str]:
    return [rat(x) for x in v]


def rat_mat(m) -> list[list[str]]:
    return [rat_vec(r) for r in m]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def form_to_dict(a: QuadForm) -> dict:
    return {"dim": a.dim, "gram": rat_mat(a.gram)}


def form_from_dict(doc: dict) -> QuadForm:
    if "form" in doc:  # allow re-ingesting documents that embed their form
        doc = doc["form"]
    gram = [[linalg.parse_rational(x) for x in row] for row in doc["gram"]]
    a = make_form(gram)
    if "dim" in doc and doc["dim"] != a.dim:
        raise ValueError(f"declared dim {doc['dim']} != gram size {a.dim}")
    return a


def contacts_to_dict(cs: ContactVectorSet) -> dict:
    return {
        "dim": cs.dim,
        "classes": [
            {
                "parity": list(cl.parity),
                "min_norm": rat(cl.min_norm),
                "minima": [list(p) for p in cl.minima],
                "relevant": cl.relevant,
            }
            for cl in cs.classes
        ],
        "contact_count": len(cs.contact_vectors()),
        "facet_normal_count": len(cs.facet_normals()),
    }


def verdict_to_dict(v: ParallelotopeVerdict) -> dict:
    out: dict = {"ok": v.ok}
    if v.failure is not None:
        out["failure"] = v.failure
    if v.belt_index is not None:
        out["belt_index"] = v.belt_index
        out["belt_length"] = v.belt_length
    if v.facet_id is not None:
        out["facet_id"] = v.facet_id
    return out


def cell_to_dict(v: VPolytope, belts: Sequence[Belt] | None = None) -> dict:
    h = v.hpoly
    out = {
        "dim": h.dim,
        "ineqs": [
            {"normal": rat_vec(iq.normal), "support": rat(iq.support)}
            for iq in h.ineqs
        ],
        "facet_count": len(v.facet_ids),
        "vertex_count": len(v.vertices),
        "vertices": [rat_vec(x) for x in v.vertices],
        "incidence": [list(inc) for inc in v.incidence],
    }
    if belts is not None:
        out["belt_lengths"] = sorted(b.length for b in belts)
    return out


def hrep_to_dict(h: polytope.HPolytope) -> dict:
    return {
        "dim": h.dim,
        "ineqs": [
            {"normal": rat_vec(iq.normal), "support": rat(iq.support)}
            for iq in h.ineqs
        ],
        "facet_count": len(h.ineqs),
    }


def dual_set_to_dict(ds: DualSet) -> dict:
    return {
        "count": len(ds.members),
        "members": [list(e) for e in ds.members],
        "basis_used": [list(p) for p in ds.basis_used],
    }


def report_to_dict(rep: ExtensionReport) -> dict:
    results = []
    for r in rep.results:
        if r.skipped:
            results.append({"b": rat(r.b), "skipped": True})
            continue
        entry: dict = {
            "b": rat(r.b),
            "skipped": False,
            "sum_facet_count": len(r.sum_cell.facet_ids),
            "sum_vertices": [rat_vec(x) for x in r.sum_cell.vertices],
            "parallelotope": verdict_to_dict(r.parallelotope),
        }
        if r.equal is not None:
            entry["equal"] = r.equal
            entry["form_cell_vertices"] = [rat_vec(x) for x in r.form_cell.vertices]
            if r.discrepancy is not None:
                entry["discrepancy_vertex"] = rat_vec(r.discrepancy)
        results.append(entry)
    return {
        "dim": rep.dim,
        "e_raw": rat_vec(rep.e_raw),
        "b_samples": [rat(b) for b in rep.b_samples],
        "normalized_e": list(rep.normalized_e) if rep.normalized_e is not None else None,
        "in_dual_set": rep.in_dual_set,
        "cannot_normalize_witnesses": [
            {"normal": list(p), "abs_product": rat(w)} for p, w in rep.violating
        ],
        "results": results,
        "irreducible_input": rep.irreducible_input,
        "theorem_silent": rep.theorem_silent,
        "notes": list(rep.notes),
        "invariants_ok": rep.invariants_ok,
        "invariant_violations": list(rep.invariant_violations),
    }


def _cycle_vertex_ids(v: VPolytope, ids: Sequence[int]) -> list[int]:
    """Order the vertices of a 2D face counterclockwise around its centroid."""
    pts = [v.vertices[i] for i in ids]
    centroid = linalg.vscale(Fraction(1, len(pts)), functools.reduce(linalg.vadd, pts))
    rel = [linalg.vsub(p, centroid) for p in pts]
    if len(rel[0]) > 2:
        base = linalg.rref(tuple(rel))
        plane = tuple(base)
        rel = [linalg.coords_in_basis(plane, r) for r in rel]
    order = polytope._angular_order(list(enumerate(rel)))
    return [ids[i] for i in order]


def to_off(v: VPolytope) -> str:
    """OFF rendering for d <= 3; decimal coordinates, display only."""
    d = v.dim
    if d > 3:
        raise ValueError("OFF export is limited to d <= 3")

    def coord(x: Fraction) -> str:
        return f"{float(x):.12g}"

    lines = ["OFF"]
    verts = [" ".join(coord(c) for c in x) + (" 0" * (3 - d)) for x in v.vertices]
    if d == 3:
        faces = [
            _cycle_vertex_ids(v, v.incidence[i]) for i in v.facet_ids
        ]
        nedges = len(polytope.codim2_faces(v))
    elif d == 2:
        faces = [_cycle_vertex_ids(v, range(len(v.vertices)))]
        nedges = len(v.vertices)
    else:
        faces = []
        nedges = len(v.vertices) - 1
    lines.append(f"{len(v.vertices)} {len(faces)} {nedges}")
    lines.extend(verts)
    for f in faces:
        lines.append(str(len(f)) + " " + " ".join(str(i) for i in f))
    return "\n".join(lines) + "\n"
