"""The bigraded Cech algebra of a labelled cover and its Maurer-Cartan elements.

An element assigns to a simplex (a_0, ..., a_p) of the nerve and an internal
degree q a graded map of degree q from the complex at a_p to the complex at
a_0; it sits in bidegree (p, q).  The operations are

    (dhat f)_{a_0..a_{p+1}} = sum_{i=1}^{p} (-1)^i f_{a_0..^a_i..a_{p+1}}
    (df)                    = (-1)^(q+1) * hom differential, componentwise
    (f . g)_{a_0..a_{p+r}}  = (-1)^(q r) f_{a_0..a_p} o g_{a_p..a_{p+r}}
    D                       = dhat + (-1)^p d

An MC element has components in bidegrees (p, 1-p), p >= 1, on
nondegenerate simplices only and satisfies Df + f.f = 0, where degenerate
simplices carry forced values (identity on (a, a), zero on longer ones).
The same engine runs over any tuple system, e.g. Delta[n].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import dg_nerve as dn
from . import homalg as ha
from .errors import ConversionRefused, IncompleteLabelling, ShapeError
from .homalg import Complex, GradedMap
from .simplex_core import TupleSystem, cech_system, components


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class Cover:
    """A finite cover given by its indices and the (downward closed) nerve."""

    indices: list
    nerve: list = field(default_factory=list)

    def __post_init__(self):
        self.indices = list(self.indices)
        self.nerve = [sorted(s, key=repr) for s in self.nerve]
        self.system = cech_system(self.indices, self.nerve)

    def present(self, S: Iterable) -> bool:
        return self.system.valid(tuple(S))

    def maximal_sets(self) -> list:
        sets = {frozenset(t) for t in self.system.all_tuples(len(self.indices))}
        return sorted((sorted(s, key=repr) for s in sets if not any(s < u for u in sets)), key=repr)


def _system(obj) -> TupleSystem:
    return obj.system if isinstance(obj, Cover) else obj


class BigradedElement:
    """A finite family of graded maps indexed by (simplex, internal degree)."""

    def __init__(self, system, labelling: Mapping, comps: Mapping | None = None, check: bool = True):
        self.system = _system(system)
        self.labelling = dict(labelling)
        self.comps = {}
        for (t, q), f in (comps or {}).items():
            t = tuple(t)
            if check:
                self._check(t, q, f)
            if not f.is_zero():
                self.comps[(t, q)] = f

    def _check(self, t, q, f):
        if not self.system.valid(t):
            raise ShapeError(f"{t} is not a simplex of the nerve")
        if f.degree != q:
            raise ShapeError(f"component at {t} has degree {f.degree}, expected {q}")
        if f.source != self.labelling[t[-1]] or f.target != self.labelling[t[0]]:
            raise ShapeError(f"component at {t} has the wrong source or target")

    def get(self, t, q) -> GradedMap:
        t = tuple(t)
        f = self.comps.get((t, q))
        if f is None:
            return GradedMap(self.labelling[t[-1]], self.labelling[t[0]], q)
        return f

    def bidegrees(self) -> set:
        return {(len(t) - 1, q) for (t, q) in self.comps}

    def like(self, comps: Mapping) -> "BigradedElement":
        return BigradedElement(self.system, self.labelling, comps, check=False)

    def __add__(self, other):
        out = dict(self.comps)
        for k, f in other.comps.items():
            out[k] = out[k] + f if k in out else f
        return self.like(out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "BigradedElement":
        return self.like({k: ha.scale(f, c) for k, f in self.comps.items()})

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())

    def __eq__(self, other):
        if not isinstance(other, BigradedElement):
            return NotImplemented
        return (self - other).is_zero()

    def restrict(self, keys: Iterable) -> "BigradedElement":
        keys = set(keys)
        return self.like({k: f for k, f in self.comps.items() if k in keys})

    def __repr__(self):
        return f"BigradedElement({len(self.comps)} components, bidegrees {sorted(self.bidegrees())})"


def _accumulate(out: dict, key, f: GradedMap, sign: int) -> None:
    if sign < 0:
        f = ha.scale(f, -1)
    out[key] = out[key] + f if key in out else f


def deleted_cech_diff(f: BigradedElement) -> BigradedElement:
    """Insert a vertex at every interior position; the dual of deleting it."""
    S = f.system
    out: dict = {}
    for (t, q), F in f.comps.items():
        p = len(t) - 1
        for i in range(1, p + 1):
            for v in S.vertices:
                n = t[:i] + (v,) + t[i:]
                if S.valid(n):
                    _accumulate(out, (n, q), F, _sgn(i))
    return f.like(out)


def internal_diff(f: BigradedElement) -> BigradedElement:
    out = {}
    for (t, q), F in f.comps.items():
        dF = ha.hom_differential(F)
        out[(t, q + 1)] = dF if _sgn(q + 1) > 0 else ha.scale(dF, -1)
    return f.like(out)


def cup(f: BigradedElement, g: BigradedElement) -> BigradedElement:
    S = f.system
    out: dict = {}
    by_start: dict = {}
    for (t, q), G in g.comps.items():
        by_start.setdefault(t[0], []).append((t, q, G))
    for (t1, q1), F in f.comps.items():
        for (t2, q2, G) in by_start.get(t1[-1], ()):
            n = t1 + t2[1:]
            if not S.valid(n):
                continue
            r = len(t2) - 1
            _accumulate(out, (n, q1 + q2), ha.compose(F, G), _sgn(q1 * r))
    return f.like(out)


def total_diff(f: BigradedElement) -> BigradedElement:
    out = deleted_cech_diff(f).comps
    for (t, q), F in internal_diff(f).comps.items():
        p = len(t) - 1
        _accumulate(out, (t, q), F, _sgn(p))
    return f.like(out)


# ---------------------------------------------------------------------------
# Maurer-Cartan elements

def amplitude_bound(labelling: Mapping) -> int:
    """Largest p for which a degree 1-p map between the labels can be nonzero."""
    objs = [C for C in labelling.values() if not C.is_zero()]
    if not objs:
        return 1
    lo = min(C.lo for C in objs)
    hi = max(C.hi for C in objs)
    return hi - lo + 1


def mc_maps(f: BigradedElement) -> dict:
    return {t: F for (t, q), F in f.comps.items()}


def forced(f: BigradedElement, t: tuple) -> GradedMap:
    """Component at any simplex, using the forced values on degenerate ones."""
    objs = [f.labelling[v] for v in t]
    return dn.forced_label(objs, t, lambda u: f.get(u, 2 - len(u)))


@dataclass
class MCRecord:
    tuple: tuple
    bidegree: tuple
    residual: GradedMap | None
    kind: str = "residual"
    message: str = ""

    @property
    def norm(self) -> int:
        return self.residual.nnz() if self.residual is not None else 0

    def as_record(self) -> dict:
        return {"kind": self.kind, "tuple": [str(x) for x in self.tuple], "bidegree": list(self.bidegree),
                "residual_nnz": self.norm, "message": self.message}


def check_mc_shape(f: BigradedElement) -> None:
    for (t, q) in f.comps:
        p = len(t) - 1
        if p < 1 or q != 1 - p:
            raise ShapeError(f"component at {t} has bidegree {(p, q)}, expected (p, 1-p) with p >= 1")
        if not TupleSystem.nondegenerate(t):
            raise ShapeError(f"component stored on the degenerate simplex {t}")


def mc_lengths(f: BigradedElement) -> range:
    return range(2, amplitude_bound(f.labelling) + 3)


def is_mc(f: BigradedElement, max_length: int | None = None) -> list[MCRecord]:
    """Residuals of Df + f.f = 0 at every nondegenerate simplex; empty means MC.

    A residual at a simplex of dimension p sits in bidegree (p, 2 - p).
    """
    check_mc_shape(f)
    top = max_length or (amplitude_bound(f.labelling) + 2)
    lab = lambda u: forced(f, u)  # noqa: E731
    out = []
    for (t, _), F in sorted(f.comps.items(), key=lambda kv: (len(kv[0][0]), repr(kv[0][0]))):
        if len(t) > top:
            out.append(MCRecord(t, (len(t) - 1, 3 - len(t)), F, "out-of-range",
                                "component beyond the amplitude bound"))
    for t in f.system.all_tuples(top):
        if len(t) < 2:
            continue
        r = dn.nerve_residual(t, lab)
        if not r.is_zero():
            out.append(MCRecord(t, (len(t) - 1, 3 - len(t)), r))
    return out


def with_forced(f: BigradedElement, max_length: int) -> BigradedElement:
    """The MC element plus its forced values on degenerate simplices."""
    out = dict(f.comps)
    for t in f.system.all_tuples(max_length, nondegenerate=False):
        if len(t) >= 2 and not TupleSystem.nondegenerate(t):
            F = forced(f, t)
            if not F.is_zero():
                out[(t, 2 - len(t))] = F
    return f.like(out)


def differential_column(f: BigradedElement) -> BigradedElement:
    """The differentials of the labels presented as the (0, 1) column."""
    return f.like({((v,), 1): GradedMap.differential(C) for v, C in f.labelling.items()})


def mc_curvature(f: BigradedElement, max_length: int) -> BigradedElement:
    """Df + f.f computed in the algebra, with forced degenerate values included."""
    F = with_forced(f, max_length)
    return total_diff(F) + cup(F, F)


def make_mc(system, labelling: Mapping, maps: Mapping) -> BigradedElement:
    return BigradedElement(system, labelling, {(t, 2 - len(t)): F for t, F in maps.items()})


def mc_to_labelling(f: BigradedElement, max_length: int | None = None) -> dict:
    """One dg-simplex per nondegenerate simplex, built from f by restriction."""
    rep = is_mc(f)
    if rep:
        raise ConversionRefused("not a Maurer-Cartan element", report=rep)
    top = max_length or (amplitude_bound(f.labelling) + 2)
    maps = mc_maps(f)
    full = {t: maps.get(t) or GradedMap(f.labelling[t[-1]], f.labelling[t[0]], 2 - len(t))
            for t in f.system.all_tuples(top) if len(t) >= 2}
    return {t: dn.simplex_of_tuple(f.labelling, full, t) for t in f.system.all_tuples(top)}


def labelling_to_mc(system, family: Mapping) -> BigradedElement:
    """Read the top labels off a functorial family of dg-simplices."""
    S = _system(system)
    labelling = {}
    for t, s in family.items():
        if len(t) == 1:
            labelling[t[0]] = s.objects[0]
    for v in S.vertices:
        if v not in labelling:
            raise IncompleteLabelling(f"no object at vertex {v}")
    maps = dn.restrict_to_top(family)
    for t, s in family.items():
        if s != dn.simplex_of_tuple(labelling, _total(maps, labelling, t), t):
            raise ConversionRefused(f"family is not functorial at {t}")
    f = make_mc(S, labelling, maps)
    rep = is_mc(f, max(len(t) for t in family))
    if rep:
        raise ConversionRefused("family does not define a Maurer-Cartan element", report=rep)
    return f


def _total(maps, labelling, t):
    out = dict(maps)
    for k in range(2, len(t) + 1):
        for I in combinations(range(len(t)), k):
            u = tuple(t[i] for i in I)
            if u not in out and TupleSystem.nondegenerate(u):
                out[u] = GradedMap(labelling[u[-1]], labelling[u[0]], 2 - len(u))
    return out


def relabel(f: BigradedElement, mapping: Mapping, system) -> BigradedElement:
    """Transport f along a bijection of vertices onto ``system``."""
    lab = {mapping[v]: C for v, C in f.labelling.items()}
    comps = {(tuple(mapping[v] for v in t), q): F for (t, q), F in f.comps.items()}
    return BigradedElement(system, lab, comps)


def split_components(f: BigradedElement) -> list:
    """Restrictions of f to the connected components of the nerve.

    An MC element on a disjoint union is the same as one on each piece.
    """
    S = f.system
    edges = [t for t in S.tuples(2)]
    out = []
    for block in components(S.vertices, edges):
        bs = set(block)
        sub = TupleSystem(block, lambda t, bs=bs: all(v in bs for v in t) and S.valid(t), kind=S.kind)
        lab = {v: f.labelling[v] for v in block}
        comps = {k: F for k, F in f.comps.items() if set(k[0]) <= bs}
        out.append(BigradedElement(sub, lab, comps))
    return out
