"""JSON encoding of complexes, maps, labellings and descent data.

Every file is an envelope

    {"format": "twistkit", "version": 1, "field": "QQ" | {"prime": p},
     "kind": ..., "payload": ...}

Scalars are "a/b" strings over QQ and reduced integers over GF(p).
Output is canonical: keys sorted, lists of keyed entries sorted by key, so
equal data encode to equal bytes.  See docs/format.md for the schema.
"""

from __future__ import annotations

import json
import os
import tempfile

from . import cech_mc as cm
from . import descent as de
from . import dg_nerve as dn
from . import gtt
from . import homalg as ha
from . import linalg as la
from .cech_mc import Cover
from .errors import FormatError
from .homalg import Complex, ElementaryDecl, GradedMap
from .simplex_core import cech_system, ordered_system, simplex_system

FORMAT = "twistkit"
VERSION = 1
KINDS = ("locfree", "twist", "green", "stc", "path", "weq", "cocycle", "gtt", "horn", "map", "mc", "nerve",
         "simplex", "strictification")


# ---------------------------------------------------------------------------
# scalars, matrices, complexes, maps

def enc_matrix(K, M) -> list:
    return [[la.scalar_to_json(K, x) for x in row] for row in la.to_rows(M)]


def dec_matrix(K, rows, shape) -> object:
    try:
        rows = [[la.scalar(K, x) for x in row] for row in rows]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"bad scalar: {exc}") from None
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise FormatError(f"matrix has the wrong shape, expected {shape}")
    return la.from_rows(rows, K, shape)


def enc_complex(C: Complex) -> dict:
    return {"dims": {str(n): C.dim(n) for n in C.degrees if C.dim(n)},
            "d": {str(n): enc_matrix(C.K, C.d(n)) for n in range(C.lo, C.hi) if C.dim(n) and C.dim(n + 1)}}


def dec_complex(K, obj) -> Complex:
    try:
        dims = {int(n): int(r) for n, r in obj.get("dims", {}).items()}
        diffs = {int(n): dec_matrix(K, M, (dims.get(int(n) + 1, 0), dims.get(int(n), 0)))
                 for n, M in obj.get("d", {}).items()}
    except (AttributeError, ValueError, TypeError) as exc:
        raise FormatError(f"bad complex: {exc}") from None
    return Complex(K, dims, diffs)


def enc_map(f: GradedMap) -> dict:
    return {"degree": f.degree,
            "comps": {str(m): enc_matrix(f.K, M) for m, M in sorted(f.comps.items()) if not la.is_zero(M)}}


def dec_map(K, obj, source: Complex, target: Complex, degree: int | None = None) -> GradedMap:
    try:
        k = int(obj["degree"])
    except (KeyError, TypeError, ValueError):
        raise FormatError("map without a degree") from None
    if degree is not None and k != degree:
        raise FormatError(f"map has degree {k}, expected {degree}")
    comps = {}
    for m, M in obj.get("comps", {}).items():
        m = int(m)
        comps[m] = dec_matrix(K, M, (target.dim(m + k), source.dim(m)))
    return GradedMap(source, target, k, comps)


def enc_decl(decl):
    return None if decl is None else [list(s) for s in decl]


def dec_decl(obj):
    return None if obj is None else ElementaryDecl(tuple(tuple(s) for s in obj))


# ---------------------------------------------------------------------------
# keys

def _key(t):
    return json.dumps(t, sort_keys=True)


def _entries(d: dict, name: str, enc) -> list:
    out = [{"tuple": list(list(x) if isinstance(x, tuple) else x for x in t), name: enc(v)} for t, v in d.items()]
    return sorted(out, key=lambda e: (len(e["tuple"]), _key(e["tuple"])))


def _tup(t):
    return tuple(tuple(x) if isinstance(x, list) else x for x in t)


# ---------------------------------------------------------------------------
# systems, covers, labellings

def enc_cover(c: Cover) -> dict:
    return {"indices": list(c.indices), "nerve": sorted([list(s) for s in c.maximal_sets()], key=_key)}


def dec_cover(obj) -> Cover:
    try:
        return Cover(list(obj["indices"]), [list(s) for s in obj.get("nerve", [])])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad cover: {exc}") from None


def enc_system(S) -> dict:
    spec = getattr(S, "_spec", None)
    if spec is None:
        raise FormatError("system has no serialisable description")
    return spec


def dec_system(obj):
    kind = obj.get("type", "cech")
    if kind == "cech":
        S = cech_system(obj["indices"], obj.get("nerve", []))
    elif kind == "simplex":
        S = simplex_system(int(obj["n"]))
    elif kind == "ordered":
        S = ordered_system(obj["vertices"], obj.get("faces"))
    else:
        raise FormatError(f"unknown system type {kind!r}")
    S._spec = obj
    return S


def enc_labelling(lab: dict) -> list:
    out = [{"vertex": v, "complex": enc_complex(C)} for v, C in lab.items()]
    return sorted(out, key=lambda e: _key(e["vertex"]))


def dec_labelling(K, obj) -> dict:
    return {(_tup(e["vertex"]) if isinstance(e["vertex"], list) else e["vertex"]): dec_complex(K, e["complex"])
            for e in obj}


def enc_tuple_maps(maps: dict) -> list:
    return _entries(maps, "map", enc_map)


def dec_tuple_maps(K, obj, lab) -> dict:
    out = {}
    for e in obj:
        t = _tup(e["tuple"])
        try:
            out[t] = dec_map(K, e["map"], lab[t[-1]], lab[t[0]], 2 - len(t))
        except KeyError:
            raise FormatError(f"tuple {t} uses an unlabelled vertex") from None
    return out


# ---------------------------------------------------------------------------
# dg-simplices and GTT labellings

def enc_simplex(s: dn.DgSimplex) -> dict:
    return {"objects": [enc_complex(C) for C in s.objects],
            "maps": sorted([{"face": list(I), "map": enc_map(f)} for I, f in s.maps.items()],
                           key=lambda e: (len(e["face"]), e["face"]))}


def dec_simplex(K, obj) -> dn.DgSimplex:
    objs = [dec_complex(K, C) for C in obj["objects"]]
    maps = {}
    for e in obj.get("maps", []):
        I = tuple(e["face"])
        if len(I) < 2 or any(not 0 <= i < len(objs) for i in I):
            raise FormatError(f"bad face {I}")
        maps[I] = dec_map(K, e["map"], objs[I[-1]], objs[I[0]], 2 - len(I))
    return dn.DgSimplex(objs, maps)


def enc_triv(tr: gtt.Trivialisation) -> dict:
    return {"complement": enc_complex(tr.complement), "decl": enc_decl(tr.decl),
            "theta": enc_map(tr.theta), "theta_inv": enc_map(tr.theta_inv)}


def dec_triv(K, obj, base: Complex, target: Complex) -> gtt.Trivialisation:
    comp = dec_complex(K, obj["complement"])
    S = ha.direct_sum([base, comp])
    return gtt.Trivialisation(comp, dec_decl(obj.get("decl")), dec_map(K, obj["theta"], S, target, 0),
                              dec_map(K, obj["theta_inv"], target, S, 0))


def enc_gtt(L: gtt.GTTLabelling) -> dict:
    verts = sorted([{"face": list(s), "simplex": enc_simplex(v)} for s, v in L.vertices.items()],
                   key=lambda e: (len(e["face"]), e["face"]))
    cells = sorted([{"tau": list(t), "sigma": list(s), "trivialisations": [enc_triv(x) for x in trs]}
                    for (t, s), trs in L.cells.items()],
                   key=lambda e: (len(e["sigma"]), e["sigma"], len(e["tau"]), e["tau"]))
    return {"p": L.p, "vertices": verts, "cells": cells}


def dec_gtt(K, obj) -> gtt.GTTLabelling:
    try:
        p = int(obj["p"])
        verts = {tuple(e["face"]): dec_simplex(K, e["simplex"]) for e in obj["vertices"]}
        L = gtt.GTTLabelling(p, verts, {})
        cells = {}
        for e in obj.get("cells", []):
            t, s = tuple(e["tau"]), tuple(e["sigma"])
            trs = e["trivialisations"]
            if len(trs) != len(t):
                raise FormatError(f"cell {(t, s)} needs one trivialisation per vertex of tau")
            cells[(t, s)] = tuple(dec_triv(K, x, L.C(j, t), L.C(j, s)) for j, x in zip(t, trs))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"bad labelling: {exc}") from None
    return gtt.GTTLabelling(p, verts, cells)


# ---------------------------------------------------------------------------
# descent data

def enc_twist(d: de.TwistingCochainData) -> dict:
    return {"cover": enc_cover(d.cover), "labelling": enc_labelling(d.labelling),
            "maps": enc_tuple_maps(d.maps), "max_length": d.max_length}


def dec_twist(K, obj, cover=None) -> de.TwistingCochainData:
    cover = cover or dec_cover(obj["cover"])
    lab = dec_labelling(K, obj["labelling"])
    return de.TwistingCochainData(cover, lab, dec_tuple_maps(K, obj.get("maps", []), lab), obj.get("max_length"))


def enc_locfree(d: de.LocFreeData) -> dict:
    return {"cover": enc_cover(d.cover), "labelling": enc_labelling(d.labelling),
            "edges": _entries(d.edges, "map", enc_map)}


def dec_locfree(K, obj) -> de.LocFreeData:
    cover = dec_cover(obj["cover"])
    lab = dec_labelling(K, obj["labelling"])
    edges = {}
    for e in obj.get("edges", []):
        a, b = _tup(e["tuple"])
        edges[(a, b)] = dec_map(K, e["map"], lab[b], lab[a], 0)
    return de.LocFreeData(cover, lab, edges)


def enc_stc(d: de.STCData) -> dict:
    return {"cover": enc_cover(d.cover), "labelling": enc_labelling(d.labelling), "max_length": d.max_length,
            "labellings": _entries(d.labellings, "labelling", enc_gtt)}


def dec_stc(K, obj) -> de.STCData:
    cover = dec_cover(obj["cover"])
    lab = dec_labelling(K, obj["labelling"])
    Ls = {_tup(e["tuple"]): dec_gtt(K, e["labelling"]) for e in obj.get("labellings", [])}
    return de.STCData(cover, lab, Ls, int(obj["max_length"]))


def enc_path(p: de.TwistPath) -> dict:
    return {"source": enc_twist(p.source), "target": enc_twist(p.target), "max_length": p.max_length,
            "maps": enc_tuple_maps(p.maps)}


def dec_path(K, obj) -> de.TwistPath:
    src = dec_twist(K, obj["source"])
    tgt = dec_twist(K, obj["target"], src.cover)
    lab = {(a, 0): C for a, C in src.labelling.items()}
    lab.update({(a, 1): C for a, C in tgt.labelling.items()})
    return de.TwistPath(src, tgt, dec_tuple_maps(K, obj.get("maps", []), lab), int(obj["max_length"]))


def enc_weq(w: de.WeakEquivalence) -> dict:
    return {"source": enc_twist(w.source), "target": enc_twist(w.target), "max_length": w.max_length,
            "components": _entries(w.components, "map", enc_map)}


def dec_weq(K, obj) -> de.WeakEquivalence:
    src = dec_twist(K, obj["source"])
    tgt = dec_twist(K, obj["target"], src.cover)
    comps = {}
    for e in obj.get("components", []):
        t = _tup(e["tuple"])
        comps[t] = dec_map(K, e["map"], tgt.labelling[t[-1]], src.labelling[t[0]], 1 - len(t))
    return de.WeakEquivalence(src.cover, src, tgt, comps, int(obj["max_length"]))


def enc_cocycle(cover, g, gauge=None) -> dict:
    K = next(iter(g.values())).domain
    out = {"cover": enc_cover(cover), "g": _entries(g, "matrix", lambda M: enc_matrix(K, M))}
    if gauge is not None:
        lam, h = gauge
        out["gauge"] = {"lambda": sorted([{"vertex": a, "matrix": enc_matrix(K, M)} for a, M in lam.items()],
                                         key=lambda e: _key(e["vertex"])),
                        "h": _entries(h, "matrix", lambda M: enc_matrix(K, M))}
    return out


def _dec_square(K, rows):
    n = len(rows)
    m = len(rows[0]) if rows else 0
    return dec_matrix(K, rows, (n, m))


def dec_cocycle(K, obj):
    cover = dec_cover(obj["cover"])
    g = {_tup(e["tuple"]): _dec_square(K, e["matrix"]) for e in obj.get("g", [])}
    gauge = None
    if "gauge" in obj:
        lam = {e["vertex"]: _dec_square(K, e["matrix"]) for e in obj["gauge"]["lambda"]}
        h = {_tup(e["tuple"]): _dec_square(K, e["matrix"]) for e in obj["gauge"]["h"]}
        gauge = (lam, h)
    return cover, g, gauge


def enc_mc(f: cm.BigradedElement) -> dict:
    return {"system": enc_system(f.system), "labelling": enc_labelling(f.labelling),
            "maps": enc_tuple_maps(cm.mc_maps(f))}


def dec_mc(K, obj) -> cm.BigradedElement:
    S = dec_system(obj["system"])
    lab = dec_labelling(K, obj["labelling"])
    return cm.make_mc(S, lab, dec_tuple_maps(K, obj.get("maps", []), lab))


def enc_nerve(S, family: dict) -> dict:
    return {"system": enc_system(S), "simplices": _entries(family, "simplex", enc_simplex)}


def dec_nerve(K, obj):
    S = dec_system(obj["system"])
    fam = {_tup(e["tuple"]): dec_simplex(K, e["simplex"]) for e in obj.get("simplices", [])}
    return S, fam


def enc_qmap(f: GradedMap) -> dict:
    return {"source": enc_complex(f.source), "target": enc_complex(f.target), "map": enc_map(f)}


def dec_qmap(K, obj) -> GradedMap:
    B, A = dec_complex(K, obj["source"]), dec_complex(K, obj["target"])
    return dec_map(K, obj["map"], B, A)


# ---------------------------------------------------------------------------
# envelope and files

def envelope(K, kind: str, payload) -> dict:
    return {"format": FORMAT, "version": VERSION, "field": la.field_spec(K), "kind": kind, "payload": payload}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str) -> tuple:
    """Parse an envelope; returns (field, kind, payload)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise FormatError("not a twistkit file")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    try:
        K = la.field_from_spec(doc.get("field"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if "payload" not in doc:
        raise FormatError("missing payload")
    return K, kind, doc["payload"]


def read(path: str) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".twistkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


DECODERS = {
    "locfree": dec_locfree, "twist": dec_twist, "stc": dec_stc, "green": dec_stc, "path": dec_path,
    "weq": dec_weq, "cocycle": dec_cocycle, "gtt": dec_gtt, "map": dec_qmap, "mc": dec_mc,
    "nerve": dec_nerve, "simplex": dec_simplex,
}


def decode(K, kind, payload):
    if kind == "horn":
        try:
            return [dec_gtt(K, x) for x in payload["faces"]], payload.get("index")
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad horn: {exc}") from None
    try:
        return DECODERS[kind](K, payload)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise FormatError(f"malformed {kind} payload: {exc!r}") from None
