"""Command-line front end.

    twistkit validate FILE [--kind K] [--strict-elementary]
    twistkit fill-horn FILE --index I [--mode stc|green] [-o OUT]
    twistkit strictify FILE [-o OUT]
    twistkit weq-from-path FILE [-o OUT]
    twistkit convert FILE --to mc|nerve [-o OUT]
    twistkit enum --what faces|horn|pair|bary|prism -p P [-q Q] [-i I] [--list]
    twistkit gen --kind twist|mc|locfree|path|horn|map|cocycle [--openings N] [--amp A] [--seed S] [-o OUT]

Exit status: 0 valid / success, 1 invalid data or refused construction,
2 malformed input or bad arguments.  Reports go to stdout as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cech_mc as cm
from . import descent as de
from . import dg_nerve as dn
from . import generators as gen
from . import gtt
from . import homalg as ha
from . import linalg as la
from . import serialize as sz
from . import simplex_core as sc
from .errors import FormatError, MalformedMap, TwistkitError

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED = 0, 1, 2


class UsageError(Exception):
    pass


def threads() -> int:
    try:
        return max(1, int(os.environ.get("TWISTKIT_THREADS", "1")))
    except ValueError:
        return 1


def _emit(obj, out=None):
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    (out or sys.stdout).write(text)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        sz.write_atomic(path, text)


def _load(path, want=None):
    try:
        K, kind, payload = sz.read(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    if want is not None and kind not in want:
        raise FormatError(f"expected a file of kind {'/'.join(want)}, got {kind}")
    if kind == "strictification":
        raise FormatError("strictification files are output only and cannot be read back")
    try:
        return K, kind, sz.decode(K, kind, payload)
    except MalformedMap as exc:
        raise FormatError(str(exc)) from None


def _result(records, extra=None) -> int:
    doc = {"valid": not records, "records": records}
    if extra:
        doc.update(extra)
    _emit(doc)
    return EXIT_OK if not records else EXIT_INVALID


# ---------------------------------------------------------------------------
# validate

def _validate_obj(K, kind, obj, strict=False) -> list:
    if kind == "locfree":
        return de.validate_locfree(obj).records
    if kind == "twist":
        return de.validate_twisting_cochain(obj).records
    if kind in ("stc", "green"):
        return de.validate_stc(obj, strict, green=(kind == "green"), workers=threads()).records
    if kind == "path":
        return de.validate_path(obj).records
    if kind == "weq":
        return de.validate_weq(obj).records
    if kind == "cocycle":
        cover, g, gauge = obj
        recs = de.validate_principal_cocycle(cover, g).records
        if gauge is not None:
            lam, h = gauge
            recs += de.validate_gauge(cover, lam, g, h).records
        return recs
    if kind == "gtt":
        r = gtt.validate_gtt(obj, strict)
        return r.errors
    if kind == "simplex":
        return [f.as_record() for f in dn.validate_dg_simplex(obj)]
    if kind == "mc":
        return [r.as_record() for r in cm.is_mc(obj)]
    if kind == "nerve":
        S, fam = obj
        try:
            cm.labelling_to_mc(S, fam)
        except TwistkitError as exc:
            return [{"kind": exc.code, "message": str(exc)}]
        return []
    if kind == "map":
        if obj.degree != 0 or not ha.is_chain_map(obj):
            return [{"kind": "chain-map", "message": "not a chain map"}]
        return []
    if kind == "horn":
        faces, index = obj
        recs = []
        for k, L in enumerate(faces):
            for e in gtt.validate_gtt(L, strict).errors:
                recs.append(dict(e, face=k))
        if len(faces) != 2:
            recs.append({"kind": "horn-shape-error", "message": "a 2-horn holds exactly two faces"})
        elif index is not None:
            try:
                gtt.check_horn2(faces[0], faces[1], int(index))
            except TwistkitError as exc:
                recs.append({"kind": exc.code, "message": str(exc)})
        return recs
    raise FormatError(f"cannot validate kind {kind}")


def cmd_validate(args) -> int:
    K, kind, obj = _load(args.file)
    if args.kind and args.kind != kind:
        raise FormatError(f"file has kind {kind}, not {args.kind}")
    try:
        recs = _validate_obj(K, kind, obj, args.strict_elementary)
    except TwistkitError as exc:
        if isinstance(exc, FormatError):
            raise
        recs = [{"kind": exc.code, "message": str(exc)}]
    return _result(recs, {"kind": kind})


# ---------------------------------------------------------------------------
# constructions

def cmd_fill_horn(args) -> int:
    K, _, (faces, index) = _load(args.file, ("horn",))
    i = args.index if args.index is not None else index
    if i is None:
        raise UsageError("horn index missing: pass --index")
    if len(faces) != 2:
        raise FormatError("a 2-horn file holds exactly two faces")
    try:
        if args.mode == "green":
            L = gtt.fill_horn2_green(faces[0], faces[1], int(i))
        else:
            L = gtt.fill_horn2(faces[0], faces[1], int(i))
    except TwistkitError as exc:
        return _result([{"kind": exc.code, "message": str(exc)}])
    rep = gtt.validate_gtt(L)
    if not rep.ok:
        return _result(rep.errors)
    _write(args.output, sz.dumps(sz.envelope(K, "gtt", sz.enc_gtt(L))))
    return EXIT_OK


def cmd_strictify(args) -> int:
    K, _, f = _load(args.file, ("map",))
    try:
        st = gtt.strictify(f)
    except TwistkitError as exc:
        return _result([{"kind": exc.code, "message": str(exc)}])
    check = st.check()
    payload = {"map": sz.enc_qmap(f), "decl_A": sz.enc_decl(st.decl_A), "decl_B": sz.enc_decl(st.decl_B),
               "A_tilde": sz.enc_complex(st.A_tilde), "B_tilde": sz.enc_complex(st.B_tilde),
               "f_tilde": sz.enc_map(st.f_tilde), "f_tilde_inv": sz.enc_map(st.f_tilde_inv), "check": check}
    _write(args.output, sz.dumps(sz.envelope(K, "strictification", payload)))
    ok = check["i_elementary"] and check["ii_padding"] and check["iii_isomorphism"] and check["iv_restriction"]
    return EXIT_OK if ok else EXIT_INVALID


def cmd_weq_from_path(args) -> int:
    K, _, p = _load(args.file, ("path",))
    rep = de.validate_path(p)
    if not rep.ok:
        return _result(rep.records)
    w = de.path_to_weq(p, check=False)
    rep = de.validate_weq(w)
    if not rep.ok:
        return _result(rep.records)
    _write(args.output, sz.dumps(sz.envelope(K, "weq", sz.enc_weq(w))))
    return EXIT_OK


def cmd_convert(args) -> int:
    K, kind, obj = _load(args.file, ("mc", "nerve"))
    try:
        if args.to == "nerve":
            f = obj if kind == "mc" else cm.labelling_to_mc(*obj)
            fam = cm.mc_to_labelling(f)
            text = sz.dumps(sz.envelope(K, "nerve", sz.enc_nerve(f.system, fam)))
        else:
            f = obj if kind == "mc" else cm.labelling_to_mc(*obj)
            if kind == "mc" and cm.is_mc(f):
                raise cm.ConversionRefused("not a Maurer-Cartan element")
            text = sz.dumps(sz.envelope(K, "mc", sz.enc_mc(f)))
    except TwistkitError as exc:
        if isinstance(exc, FormatError):
            raise
        return _result([{"kind": exc.code, "message": str(exc)}])
    _write(args.output, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# enumeration

def _fmt_face(f):
    return "".join(map(str, f.vertices)) if hasattr(f, "vertices") else str(f)


def cmd_enum(args) -> int:
    p, q = args.p, args.q
    what = args.what
    if p < 0 or (q is not None and q < 0):
        raise UsageError("dimensions must be nonnegative")
    if what == "faces":
        dims = [q] if q is not None else range(p + 1)
        groups = {k: sc.enumerate_faces(p, k) for k in dims}
        lines = {k: [_fmt_face(f) for f in v] for k, v in groups.items()}
    elif what == "horn":
        if args.i is None:
            raise UsageError("--what horn needs -i")
        fs = sc.horn_simplices(p, args.i)
        by = {}
        for f in fs:
            by.setdefault(f.dim, []).append(_fmt_face(f))
        lines = {k: by.get(k, []) for k in ([q] if q is not None else range(p + 1))}
    elif what == "pair":
        cells = sc.pair_cells(p)
        by = {}
        for c in cells:
            by.setdefault(c.dim, []).append(f"({_fmt_face(c.tau)},{_fmt_face(c.sigma)})")
        lines = {k: by.get(k, []) for k in ([q] if q is not None else range(p + 1))}
    elif what == "bary":
        dims = [q] if q is not None else range(p + 1)
        lines = {}
        for k in dims:
            _, flags = sc.bary_flags(p, k)
            lines[k] = ["<".join(_fmt_face(f) for f in ch) for ch in flags]
    elif what == "prism":
        dims = [q] if q is not None else range(p + 2)
        lines = {k: [" ".join(f"{i}{j}" for i, j in s.path) for s in sc.prism_simplices(p, k)] for k in dims}
    else:
        raise UsageError(f"unknown --what {what}")
    counts = [len(lines[k]) for k in lines]
    print(" ".join(map(str, counts)))
    if args.list:
        for k, items in lines.items():
            for x in items:
                print(f"{k}\t{x}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# generators

def _cover(n):
    idx = [chr(ord("a") + k) for k in range(n)]
    return cm.Cover(idx, [idx])


def cmd_gen(args) -> int:
    n, amp, seed = args.openings, args.amp, args.seed
    if not 1 <= n <= 4 or not 0 <= amp <= 2 or not 1 <= args.maxdim <= 3:
        raise UsageError("parameters out of range: 1 <= openings <= 4, 0 <= amp <= 2, 1 <= maxdim <= 3")
    try:
        K = la.field_from_spec(args.field if args.field == "QQ" else {"prime": int(args.field)})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rng = gen.make_rng(seed)
    cover = _cover(n)
    kw = dict(lo=0, amp=amp, maxdim=args.maxdim)
    if args.kind == "twist":
        d = gen.random_twisting_cochain(rng, K, cover, **kw)
        doc = sz.envelope(K, "twist", sz.enc_twist(d))
    elif args.kind == "mc":
        S = sc.simplex_system(args.simplex) if args.simplex is not None else cover.system
        objs, maps, _ = gen.random_mc_data(rng, K, S, **kw)
        doc = sz.envelope(K, "mc", sz.enc_mc(cm.make_mc(S, objs, maps)))
    elif args.kind == "locfree":
        objs, edges = gen.random_iso_cocycle(rng, K, cover.indices, 0, amp, args.maxdim)
        doc = sz.envelope(K, "locfree", sz.enc_locfree(de.LocFreeData(cover, objs, edges)))
    elif args.kind == "path":
        p = gen.random_twist_path(rng, K, cover, **kw)
        doc = sz.envelope(K, "path", sz.enc_path(p))
    elif args.kind == "horn":
        a, b, _ = gen.random_horn2(rng, K, args.index, **kw)
        doc = sz.envelope(K, "horn", {"faces": [sz.enc_gtt(a), sz.enc_gtt(b)], "index": args.index})
    elif args.kind == "map":
        f = gen.random_quasi_iso(rng, K, **kw)
        doc = sz.envelope(K, "map", sz.enc_qmap(f))
    elif args.kind == "cocycle":
        g = gen.random_gl_cocycle(rng, K, cover.indices, args.maxdim)
        doc = sz.envelope(K, "cocycle", sz.enc_cocycle(cover, g))
    else:
        raise UsageError(f"unknown kind {args.kind}")
    _write(args.output, sz.dumps(doc))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistkit", description="Descent data for complexes of free modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a data file")
    v.add_argument("file")
    v.add_argument("--kind", choices=sz.KINDS)
    v.add_argument("--strict-elementary", action="store_true",
                   help="require complements to have partial-permutation differentials")
    v.set_defaults(func=cmd_validate)

    h = sub.add_parser("fill-horn", help="fill a 2-horn of labellings")
    h.add_argument("file")
    h.add_argument("--index", "-i", type=int, choices=(0, 1, 2))
    h.add_argument("--mode", choices=("stc", "green"), default="stc")
    h.add_argument("-o", "--output")
    h.set_defaults(func=cmd_fill_horn)

    s = sub.add_parser("strictify", help="pad a quasi-isomorphism into an isomorphism")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_strictify)

    w = sub.add_parser("weq-from-path", help="extract a weak equivalence from a path")
    w.add_argument("file")
    w.add_argument("-o", "--output")
    w.set_defaults(func=cmd_weq_from_path)

    c = sub.add_parser("convert", help="convert between MC elements and families of dg-simplices")
    c.add_argument("file")
    c.add_argument("--to", choices=("mc", "nerve"), required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)

    e = sub.add_parser("enum", help="enumerate simplices and cells")
    e.add_argument("--what", choices=("faces", "horn", "pair", "bary", "prism"), required=True)
    e.add_argument("-p", type=int, required=True)
    e.add_argument("-q", type=int)
    e.add_argument("-i", type=int)
    e.add_argument("--list", action="store_true")
    e.set_defaults(func=cmd_enum)

    g = sub.add_parser("gen", help="generate a random valid fixture")
    g.add_argument("--kind", choices=("twist", "mc", "locfree", "path", "horn", "map", "cocycle"), default="twist")
    g.add_argument("--openings", "-n", type=int, default=2)
    g.add_argument("--amp", "-a", type=int, default=1)
    g.add_argument("--maxdim", type=int, default=2)
    g.add_argument("--seed", "-s", type=int, default=0)
    g.add_argument("--field", default="QQ", help="QQ or a prime")
    g.add_argument("--index", type=int, default=0, choices=(0, 1, 2), help="horn index for --kind horn")
    g.add_argument("--simplex", type=int, help="for --kind mc: use Delta[n] instead of the cover nerve")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (FormatError, UsageError) as exc:
        _emit({"valid": False, "error": "malformed-input", "message": str(exc)}, sys.stderr)
        return EXIT_MALFORMED
    except TwistkitError as exc:
        if exc.code in ("invalid-input", "invalid-dimension", "invalid-index"):
            _emit({"valid": False, "error": exc.code, "message": str(exc)}, sys.stderr)
            return EXIT_MALFORMED
        _emit({"valid": False, "records": [{"kind": exc.code, "message": str(exc)}]})
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
