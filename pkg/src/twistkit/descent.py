"""Descent data over a finite cover: points and paths of the three presheaves.

Points
    LocFreeData        complexes E_a with invertible chain maps phi_ab : E_b -> E_a
    TwistingCochainData  complexes with an MC element whose edges are quasi-isomorphisms
    STCData            one labelling of the pair subdivision per Cech tuple, coherent
                       under faces and degeneracies (Green data when all are strict)

Paths
    TwistPath          an MC element on the product of the Cech nerve with Delta[1]
                       whose ends are two twisting cochains
    WeakEquivalence    components Lambda_T of bidegree (p, -p)

Restriction maps are identities, so "the label of a sub-tuple" means the same
data literally.  Tuples are read with the usual conventions: a component at
(a_0, ..., a_p) maps the complex at a_p to the complex at a_0.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import cech_mc as cm
from . import dg_nerve as dn
from . import gtt
from . import homalg as ha
from . import linalg as la
from .cech_mc import Cover
from .errors import IncompleteLabelling, NotInvertible, ShapeError
from .homalg import Complex, GradedMap
from .simplex_core import TupleSystem, reduce_tuple


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


def _name(t) -> list:
    return [str(x) for x in t]


@dataclass
class Report:
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.records

    def add(self, kind, tuple_=None, bidegree=None, cell=None, message="", residual=None):
        rec = {"kind": kind, "tuple": _name(tuple_) if tuple_ is not None else None,
               "bidegree": list(bidegree) if bidegree is not None else None,
               "cell": cell, "message": message}
        if residual is not None:
            rec["residual_nnz"] = residual.nnz()
        self.records.append(rec)

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    def kinds(self) -> set:
        return {r["kind"] for r in self.records}

    def tuples(self, kind=None) -> set:
        return {tuple(r["tuple"]) for r in self.records if kind is None or r["kind"] == kind}


# ---------------------------------------------------------------------------
# locally free data

@dataclass
class LocFreeData:
    cover: Cover
    labelling: dict
    edges: dict

    def edge(self, a, b) -> GradedMap:
        if a == b and (a, a) not in self.edges:
            return ha.identity(self.labelling[a])
        try:
            return self.edges[(a, b)]
        except KeyError:
            raise IncompleteLabelling(f"no edge on ({a}, {b})") from None


def validate_locfree(d: LocFreeData) -> Report:
    """Invertible chain maps with phi_aa = id and phi_ac = phi_ab o phi_bc on every present triple."""
    rep = Report()
    S = d.cover.system
    for t in S.tuples(2):
        f = d.edge(*t)
        a, b = t
        if f.degree != 0 or f.source != d.labelling[b] or f.target != d.labelling[a]:
            rep.add("shape", t, (1, 0), message="edge has the wrong degree, source or target")
            continue
        if not ha.is_chain_map(f):
            rep.add("chain-map", t, (1, 0), message="edge is not a chain map")
        elif not ha.is_iso(f):
            rep.add("invertible", t, (1, 0), message="edge is not invertible")
    for a in S.vertices:
        if (a, a) in d.edges and d.edges[(a, a)] != ha.identity(d.labelling[a]):
            rep.add("identity", (a, a), (1, 0), message="phi_aa is not the identity")
    if not rep.ok:
        return rep
    for t in S.tuples(3):
        a, b, c = t
        r = d.edge(a, c) - ha.compose(d.edge(a, b), d.edge(b, c))
        if not r.is_zero():
            rep.add("cocycle", t, (2, 0), message="phi_ac != phi_ab o phi_bc", residual=r)
    return rep


# ---------------------------------------------------------------------------
# twisting cochains

@dataclass
class TwistingCochainData:
    cover: Cover
    labelling: dict
    maps: dict
    max_length: int | None = None

    def __post_init__(self):
        self.maps = {tuple(t): f for t, f in self.maps.items()}

    @property
    def system(self) -> TupleSystem:
        return self.cover.system

    def length(self) -> int:
        # MC residuals can be nonzero up to two past the amplitude bound
        return max(self.max_length or 0, cm.amplitude_bound(self.labelling) + 2)

    def mc(self) -> cm.BigradedElement:
        nd = {t: f for t, f in self.maps.items() if TupleSystem.nondegenerate(t)}
        return cm.make_mc(self.system, self.labelling, nd)

    def label(self, t) -> GradedMap:
        t = tuple(t)
        if len(t) == 1:
            return GradedMap.differential(self.labelling[t[0]])
        objs = [self.labelling[v] for v in t]
        return dn.forced_label(objs, t, lambda u: self.maps.get(u) or GradedMap(
            self.labelling[u[-1]], self.labelling[u[0]], 2 - len(u)))

    def simplex(self, t) -> dn.DgSimplex:
        full = {u: self.label(u) for u in _subtuples(t) if len(u) >= 2}
        return dn.simplex_of_tuple(self.labelling, full, t)


def _subtuples(t):
    from itertools import combinations
    t = tuple(t)
    return {tuple(t[i] for i in I) for k in range(1, len(t) + 1) for I in combinations(range(len(t)), k)}


def validate_twisting_cochain(d: TwistingCochainData) -> Report:
    rep = Report()
    for t, f in sorted(d.maps.items(), key=lambda kv: (len(kv[0]), repr(kv[0]))):
        if not d.system.valid(t):
            rep.add("shape", t, message="not a simplex of the nerve")
        elif not TupleSystem.nondegenerate(t):
            want = d.label(t)
            if f != want:
                rep.add("degeneracy", t, (len(t) - 1, 2 - len(t)),
                        message="degenerate component differs from its forced value")
    if not rep.ok:
        return rep
    # files list every nondegenerate tuple up to their longest stored length
    top = max((len(t) for t in d.maps), default=1)
    for t in d.system.all_tuples(top):
        if len(t) >= 2 and t not in d.maps:
            rep.add("incomplete", t, (len(t) - 1, 2 - len(t)), message="no component stored on this simplex")
    if not rep.ok:
        return rep
    try:
        f = d.mc()
    except ShapeError as exc:
        rep.add("shape", message=str(exc))
        return rep
    for r in cm.is_mc(f, d.length()):
        rep.add("mc", r.tuple, r.bidegree, message=r.kind, residual=r.residual)
    for t in d.system.tuples(2):
        if not ha.is_quasi_iso(d.label(t)):
            rep.add("quasi-iso", t, (1, 0), message="edge is not a quasi-isomorphism")
    return rep


def embed_locfree(d: LocFreeData) -> TwistingCochainData:
    """A cocycle of isomorphisms is a twisting cochain with no higher terms."""
    maps = {t: d.edge(*t) for t in d.cover.system.tuples(2)}
    return TwistingCochainData(d.cover, dict(d.labelling), maps)


# ---------------------------------------------------------------------------
# simplicial twisting cochains and Green data

@dataclass
class STCData:
    cover: Cover
    labelling: dict
    labellings: dict
    max_length: int

    def __post_init__(self):
        self.labellings = {tuple(t): L for t, L in self.labellings.items()}

    def at(self, t) -> gtt.GTTLabelling:
        """Labelling over any tuple; degenerate ones are pulled back from their reduction."""
        t = tuple(t)
        r = reduce_tuple(t)
        if len(r) == 1:
            base = gtt.from_complex(self.labelling[r[0]])
        else:
            try:
                base = self.labellings[r]
            except KeyError:
                raise IncompleteLabelling(f"no labelling over {r}") from None
        if r == t:
            return base
        m, k = [], -1
        for i, v in enumerate(t):
            if i == 0 or v != t[i - 1]:
                k += 1
            m.append(k)
        return gtt.gtt_pullback(base, m)


GreenData = STCData


def _check_tuple(d: STCData, t, strict: bool, green: bool) -> Report:
    rep = Report()
    L = d.at(t)
    if L.p != len(t) - 1:
        rep.add("shape", t, message="labelling has the wrong dimension")
        return rep
    for i, v in enumerate(t):
        if L.C(i, (i,)) != d.labelling[v]:
            rep.add("vertex", t, cell=str(i), message="vertex complex differs from the cover labelling")
    g = gtt.validate_gtt(L, strict)
    for e in g.errors:
        rep.add("gtt-" + e["kind"], t, cell=e["cell"], message=e["message"])
    if green and g.ok and not gtt.is_gtt1(L):
        rep.add("green", t, message="labelling is not strict")
    for i in range(len(t)):
        u = t[:i] + t[i + 1:]
        if gtt.gtt_face(L, i) != d.at(u):
            rep.add("coherence", t, cell=f"face {i}", message="face differs from the labelling of the face tuple")
    return rep


def validate_stc(d: STCData, strict: bool = False, green: bool = False, workers: int = 1) -> Report:
    """Per-tuple labelling checks plus face coherence, in tuple order."""
    tuples = [t for t in d.cover.system.all_tuples(d.max_length) if len(t) >= 2]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda t: _check_tuple(d, t, strict, green), tuples))
    else:
        parts = [_check_tuple(d, t, strict, green) for t in tuples]
    rep = Report()
    for r in parts:
        rep.extend(r)
    return rep


def validate_green(d: STCData, strict: bool = False) -> Report:
    return validate_stc(d, strict, green=True)


def stc_from_twisting_cochain(d: TwistingCochainData, max_length: int | None = None) -> STCData:
    top = max_length or d.length()
    out = {t: gtt.include_twist(d.simplex(t)) for t in d.system.all_tuples(top) if len(t) >= 2}
    return STCData(d.cover, dict(d.labelling), out, top)


def export_stc_notation(d: STCData) -> dict:
    """Per tuple and face sigma: the complexes E_{sigma,i}, the complements
    E_{sigma,tau,i} and the local MC data a_sigma, with an MC check.

    Entries are indexed by position in the tuple, since Cech tuples may
    repeat an index.
    """
    out = {}
    for T, L in sorted(d.labellings.items(), key=lambda kv: (len(kv[0]), repr(kv[0]))):
        per = {}
        for s in L.faces():
            v = L.vertex(s)
            objs = {(i, T[i]): L.C(i, s) for i in s}
            comps = {}
            for (t, s2), trs in L.cells.items():
                if s2 == s:
                    for j, tr in zip(t, trs):
                        comps[(t, (j, T[j]))] = tr.complement
            a = {}
            for I in v.faces():
                ell = len(I) - 1
                a.setdefault(ell, {})[tuple(s[k] for k in I)] = v.label(I)
            per[s] = {"objects": objs, "complements": comps, "a": a, "mc": dn.is_valid(v)}
        out[T] = per
    return out


# ---------------------------------------------------------------------------
# paths and weak equivalences

def _prism_tuple(T: Sequence, m: int) -> tuple:
    """Delta_m: along the bottom to T[m], up, then along the top."""
    T = tuple(T)
    return tuple((v, 0) for v in T[: m + 1]) + tuple((v, 1) for v in T[m:])


@dataclass
class TwistPath:
    """An MC labelling of the product of the nerve with Delta[1].

    Vertex (a, 0) carries E_a and (a, 1) carries F_a; ``maps`` holds the
    components on nondegenerate product tuples.
    """

    source: TwistingCochainData
    target: TwistingCochainData
    maps: dict
    max_length: int

    def __post_init__(self):
        self.maps = {tuple(tuple(x) for x in t): f for t, f in self.maps.items()}

    @property
    def cover(self) -> Cover:
        return self.source.cover

    @property
    def system(self) -> TupleSystem:
        return self.cover.system.product_with_interval()

    @property
    def labelling(self) -> dict:
        lab = {(a, 0): C for a, C in self.source.labelling.items()}
        lab.update({(a, 1): C for a, C in self.target.labelling.items()})
        return lab

    def label(self, t) -> GradedMap:
        t = tuple(t)
        lab = self.labelling
        if len(t) == 1:
            return GradedMap.differential(lab[t[0]])
        return dn.forced_label([lab[v] for v in t], t, lambda u: self.maps.get(u) or GradedMap(
            lab[u[-1]], lab[u[0]], 2 - len(u)))

    def tuples(self) -> list:
        S = self.system
        out = []
        for t in S.all_tuples(self.max_length + 1):
            if len(reduce_tuple([x[0] for x in t])) <= self.max_length:
                out.append(t)
        return out


def validate_path(p: TwistPath) -> Report:
    rep = Report()
    if p.source.cover is not p.target.cover and p.source.cover.system.vertices != p.target.cover.system.vertices:
        rep.add("shape", message="endpoints live on different covers")
        return rep
    S = p.system
    lab = p.labelling
    for t, f in p.maps.items():
        if not S.valid(t) or not TupleSystem.nondegenerate(t):
            rep.add("shape", t, message="not a nondegenerate simplex of the prism")
        elif f.degree != 2 - len(t) or f.source != lab[t[-1]] or f.target != lab[t[0]]:
            rep.add("shape", t, message="wrong degree, source or target")
    if not rep.ok:
        return rep
    for t in p.tuples():
        if len(t) < 2:
            continue
        js = {x[1] for x in t}
        if len(js) == 1:
            end = p.source if js == {0} else p.target
            if p.label(t) != end.label(tuple(x[0] for x in t)):
                rep.add("endpoint", t, message="restriction differs from the endpoint data")
        r = dn.nerve_residual(t, p.label)
        if not r.is_zero():
            rep.add("relation", t, (len(t) - 1, 3 - len(t)), residual=r)
    for a in p.cover.system.vertices:
        if not ha.is_quasi_iso(p.label(((a, 0), (a, 1)))):
            rep.add("quasi-iso", ((a, 0), (a, 1)), message="lambda is not a quasi-isomorphism")
    return rep


def constant_path(d: TwistingCochainData, max_length: int | None = None) -> TwistPath:
    """The path that stays at d: pull back along the projection of the prism."""
    top = max_length or d.length()
    S = d.system.product_with_interval()
    maps = {}
    for t in S.all_tuples(top + 1):
        base = tuple(x[0] for x in t)
        if len(t) >= 2 and len(reduce_tuple(base)) <= top:
            f = d.label(base)
            if not f.is_zero():
                maps[t] = f
    return TwistPath(d, d, maps, top)


@dataclass
class WeakEquivalence:
    cover: Cover
    source: TwistingCochainData
    target: TwistingCochainData
    components: dict
    max_length: int
    path: TwistPath | None = None

    def get(self, t) -> GradedMap:
        t = tuple(t)
        f = self.components.get(t)
        if f is None:
            return GradedMap(self.target.labelling[t[-1]], self.source.labelling[t[0]], 1 - len(t))
        return f

    def __eq__(self, other):
        if not isinstance(other, WeakEquivalence):
            return NotImplemented
        keys = set(self.components) | set(other.components)
        return all(self.get(t) == other.get(t) for t in keys)


def path_to_weq(p: TwistPath, check: bool = True) -> WeakEquivalence:
    """Lambda_T = sum_m (-1)^m f_{Delta_m(T)} over the prism on T."""
    if check:
        rep = validate_path(p)
        if not rep.ok:
            from .errors import Refused
            err = Refused("path does not validate")
            err.report = rep
            raise err
    comps = {}
    for T in p.cover.system.all_tuples(p.max_length):
        terms = [ha.scale(p.label(_prism_tuple(T, m)), _sgn(m)) for m in range(len(T))]
        f = ha.add_all(terms)
        if not f.is_zero():
            comps[T] = f
    return WeakEquivalence(p.cover, p.source, p.target, comps, p.max_length, p)


def weq_residual(w: WeakEquivalence, T: Sequence) -> GradedMap:
    """dhat Lambda + E.Lambda - Lambda.F at T, written out with the differentials
    of E and F in the j = 0 and j = p terms.  Lambda vanishes on degenerate tuples."""
    T = tuple(T)
    p = len(T) - 1
    E, F = w.source, w.target

    def lam(u):
        if not TupleSystem.nondegenerate(u):
            return GradedMap(F.labelling[u[-1]], E.labelling[u[0]], 1 - len(u))
        return w.get(u)

    terms = []
    for i in range(1, p):
        terms.append(ha.scale(lam(T[:i] + T[i + 1:]), _sgn(i)))
    for j in range(p + 1):
        terms.append(ha.scale(ha.compose(E.label(T[: j + 1]), lam(T[j:])), _sgn((1 - j) * (p - j))))
        terms.append(ha.scale(ha.compose(lam(T[: j + 1]), F.label(T[j:])), -_sgn(j * (p - j))))
    return ha.add_all(terms)


def validate_weq(w: WeakEquivalence) -> Report:
    rep = Report()
    E, F = w.source, w.target
    for t, f in w.components.items():
        if f.degree != 1 - len(t) or f.source != F.labelling[t[-1]] or f.target != E.labelling[t[0]]:
            rep.add("shape", t, (len(t) - 1, 1 - len(t)), message="wrong degree, source or target")
    if not rep.ok:
        return rep
    for T in w.cover.system.all_tuples(w.max_length):
        r = weq_residual(w, T)
        if not r.is_zero():
            rep.add("relation", T, (len(T) - 1, 2 - len(T)), residual=r)
    for a in w.cover.system.vertices:
        if not ha.is_quasi_iso(w.get((a,))):
            rep.add("quasi-iso", (a,), (0, 0), message="Lambda_a is not a quasi-isomorphism")
    return rep


def identity_weq(d: TwistingCochainData, max_length: int | None = None) -> WeakEquivalence:
    top = max_length or d.length()
    comps = {(a,): ha.identity(C) for a, C in d.labelling.items()}
    return WeakEquivalence(d.cover, d, d, comps, top)


def sign_identity(lam: int, j: int) -> bool:
    """(-1)^(lam (j - 1)) == (-1)^((1 - j)(lam - j)), the parity fact behind the sign bookkeeping."""
    return _sgn(lam * (j - 1)) == _sgn((1 - j) * (lam - j))


# ---------------------------------------------------------------------------
# principal bundles: group-valued cocycles and gauge transformations

def _check_invertible(M, what):
    if M.shape[0] != M.shape[1] or la.inverse(M) is None:
        raise NotInvertible(f"{what} is not invertible")


def validate_principal_cocycle(cover: Cover, g: Mapping, K=None) -> Report:
    """g_aa = id and g_bc g_ab = g_ac, matrices multiplied as elements of GL_n."""
    rep = Report()
    S = cover.system
    for k, M in g.items():
        _check_invertible(M, f"g_{k}")
    for a in S.vertices:
        if (a, a) in g and not la.equal(g[(a, a)], la.eye(g[(a, a)].shape[0], g[(a, a)].domain)):
            rep.add("identity", (a, a), message="g_aa is not the identity")
    for t in S.tuples(2):
        if t not in g:
            raise IncompleteLabelling(f"no transition function on {t}")

    def get(a, b):
        if a == b and (a, a) not in g:
            n = next(iter(g.values())).shape[0]
            return la.eye(n, next(iter(g.values())).domain)
        return g[(a, b)]

    for t in S.tuples(3):
        a, b, c = t
        if not la.equal(get(b, c) * get(a, b), get(a, c)):
            rep.add("cocycle", t, message="g_bc g_ab != g_ac")
    return rep


def validate_gauge(cover: Cover, lam: Mapping, g: Mapping, h: Mapping) -> Report:
    """h_ab lambda_a = lambda_b g_ab on every present pair."""
    rep = Report()
    for k, M in list(lam.items()) + list(g.items()) + list(h.items()):
        _check_invertible(M, f"matrix at {k}")
    for t in cover.system.tuples(2):
        a, b = t
        if t not in g or t not in h:
            raise IncompleteLabelling(f"no transition function on {t}")
        if not la.equal(h[t] * lam[a], lam[b] * g[t]):
            rep.add("gauge", t, message="h_ab lambda_a != lambda_b g_ab")
    return rep
