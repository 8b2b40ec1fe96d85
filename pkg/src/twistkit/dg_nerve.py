"""Simplices of the dg-nerve of the dg-category of complexes.

A p-simplex has a complex at each vertex 0..p and, for every face
I = (i_0 < ... < i_k) with k >= 1, a graded map f_I of degree 1 - k from the
complex at i_k to the complex at i_0.  The defining relation is

    df_I = sum_{j=1}^{k-1} (-1)^(j-1) f_{I - i_j}
         + sum_{j=1}^{k-1} (-1)^(k(j-1)+1) f_{i_0..i_j} o f_{i_j..i_k}

where composition is ordinary composition of maps (apply the right factor
first).  For k = 1 it says that f_I is a chain map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Sequence

from . import homalg as ha
from .errors import IncompleteLabelling, InvalidIndex, MalformedMap
from .homalg import Complex, GradedMap


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class DgSimplex:
    objects: list
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        self.objects = list(self.objects)
        self.maps = {tuple(k): v for k, v in self.maps.items()}

    @property
    def dim(self) -> int:
        return len(self.objects) - 1

    def faces(self):
        p = self.dim
        return [I for k in range(2, p + 2) for I in combinations(range(p + 1), k)]

    def label(self, I: Sequence[int]) -> GradedMap:
        I = tuple(I)
        if len(I) == 1:
            return GradedMap.differential(self.objects[I[0]])
        try:
            return self.maps[I]
        except KeyError:
            raise IncompleteLabelling(f"no label on face {I}") from None

    def __eq__(self, other):
        if not isinstance(other, DgSimplex) or self.dim != other.dim:
            return False
        if any(a != b for a, b in zip(self.objects, other.objects)):
            return False
        return all(self.label(I) == other.label(I) for I in self.faces())


@dataclass
class Failure:
    face: tuple
    kind: str
    residual: GradedMap | None = None
    message: str = ""

    @property
    def norm(self) -> int:
        return self.residual.nnz() if self.residual is not None else 0

    def as_record(self) -> dict:
        return {"kind": self.kind, "face": list(self.face), "residual_nnz": self.norm, "message": self.message}


def nerve_residual(I: Sequence, label: Callable[[tuple], GradedMap]) -> GradedMap:
    """Residual of the dg-nerve relation at I; zero exactly when it holds.

    ``label`` is called on sub-tuples of I of length >= 2, which may repeat
    entries when I comes from a degenerate or Cech simplex.
    """
    I = tuple(I)
    k = len(I) - 1
    res = ha.hom_differential(label(I))
    for j in range(1, k):
        g = label(I[:j] + I[j + 1:])
        res = res - g if _sgn(j - 1) > 0 else res + g
    for j in range(1, k):
        g = ha.compose(label(I[: j + 1]), label(I[j:]))
        res = res - g if _sgn(k * (j - 1) + 1) > 0 else res + g
    return res


def check_shapes(s: DgSimplex) -> list[Failure]:
    out = []
    for I in s.faces():
        if I not in s.maps:
            raise IncompleteLabelling(f"no label on face {I}")
        f = s.maps[I]
        want_deg = 2 - len(I)
        if f.degree != want_deg or f.source != s.objects[I[-1]] or f.target != s.objects[I[0]]:
            out.append(Failure(I, "shape", None, f"expected degree {want_deg} from vertex {I[-1]} to {I[0]}"))
    return out


def validate_dg_simplex(s: DgSimplex) -> list[Failure]:
    """Every face where the defining relation fails, with its residual."""
    bad = check_shapes(s)
    if bad:
        return bad
    out = []
    for I in s.faces():
        r = nerve_residual(I, s.label)
        if not r.is_zero():
            out.append(Failure(I, "relation", r))
    return out


def is_valid(s: DgSimplex) -> bool:
    return not validate_dg_simplex(s)


def forced_label(objects: Sequence[Complex], t: tuple, stored: Callable[[tuple], GradedMap]) -> GradedMap:
    """Label of a possibly degenerate tuple: identity on a collapsed edge, zero
    on larger degenerate faces, the stored map otherwise."""
    if len(t) >= 2 and any(a == b for a, b in zip(t, t[1:])):
        if len(t) == 2:
            return ha.identity(objects[0])
        return GradedMap(objects[-1], objects[0], 2 - len(t))
    return stored(t)


def pullback(s: DgSimplex, m: Sequence[int]) -> DgSimplex:
    """Restrict s along a weakly increasing map [q] -> [p] given by its values."""
    m = tuple(m)
    if any(b < a for a, b in zip(m, m[1:])) or (m and (m[0] < 0 or m[-1] > s.dim)):
        raise InvalidIndex(f"{m} is not a monotone map into [{s.dim}]")
    objs = [s.objects[v] for v in m]
    maps = {}
    q = len(m) - 1
    for k in range(2, q + 2):
        for I in combinations(range(q + 1), k):
            t = tuple(m[i] for i in I)
            maps[I] = forced_label([s.objects[v] for v in t], t, s.label)
    return DgSimplex(objs, maps)


def face(s: DgSimplex, i: int) -> DgSimplex:
    if not 0 <= i <= s.dim or s.dim == 0:
        raise InvalidIndex(f"face index {i} out of range")
    return pullback(s, [v for v in range(s.dim + 1) if v != i])


def degeneracy(s: DgSimplex, i: int) -> DgSimplex:
    if not 0 <= i <= s.dim:
        raise InvalidIndex(f"degeneracy index {i} out of range")
    return pullback(s, [v for v in range(s.dim + 1) for _ in range(2 if v == i else 1)])


def edges(s: DgSimplex):
    return [I for I in s.faces() if len(I) == 2]


def in_core(s: DgSimplex) -> bool:
    return all(ha.is_quasi_iso(s.label(I)) for I in edges(s))


def is_ordinary_core(s: DgSimplex) -> bool:
    if any(not s.label(I).is_zero() for I in s.faces() if len(I) >= 3):
        return False
    return all(ha.is_iso(s.label(I)) for I in edges(s))


def is_nerve_simplex(s: DgSimplex) -> bool:
    return all(s.label(I).is_zero() for I in s.faces() if len(I) >= 3)


def simplex_from_maps(objects: Sequence[Complex], top: Mapping) -> DgSimplex:
    """Build a simplex from labels on nondegenerate faces given as tuples of vertex positions."""
    return DgSimplex(list(objects), dict(top))


# ---------------------------------------------------------------------------
# finite simplicial sets presented as tuple systems

def simplex_of_tuple(objects: Mapping, maps: Mapping, t: Sequence) -> DgSimplex:
    """The dg-simplex that a labelling of X assigns to the simplex t of X.

    ``objects`` maps vertices of X to complexes and ``maps`` maps
    nondegenerate tuples of length >= 2 to graded maps.
    """
    t = tuple(t)
    objs = [objects[v] for v in t]

    def stored(u):
        try:
            return maps[u]
        except KeyError:
            raise IncompleteLabelling(f"no label on simplex {u}") from None

    lab = {}
    for k in range(2, len(t) + 1):
        for I in combinations(range(len(t)), k):
            u = tuple(t[i] for i in I)
            lab[I] = forced_label([objects[v] for v in u], u, stored)
    return DgSimplex(objs, lab)


@dataclass
class SpineReport:
    failures: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_spine(system, objects: Mapping, maps: Mapping, max_length: int) -> SpineReport:
    """Check the labelling relation on every nondegenerate simplex of X up to max_length."""
    rep = SpineReport()

    def lab(u):
        return forced_label([objects[v] for v in u], u, lambda w: maps[w])

    for t in system.all_tuples(max_length):
        if len(t) < 2:
            continue
        if t not in maps:
            raise IncompleteLabelling(f"no label on simplex {t}")
        f = maps[t]
        if f.degree != 2 - len(t) or f.source != objects[t[-1]] or f.target != objects[t[0]]:
            rep.failures[t] = Failure(t, "shape", None, "wrong degree, source or target")
            continue
        r = nerve_residual(t, lab)
        if not r.is_zero():
            rep.failures[t] = Failure(t, "relation", r)
    return rep


def extend_spine(system, objects: Mapping, maps: Mapping, max_length: int | None = None) -> dict:
    """Extend per-simplex maps to a dg-simplex on every nondegenerate simplex of X.

    Raises MalformedMap carrying the per-simplex report when the relation
    fails somewhere.
    """
    if max_length is None:
        max_length = system.top_length()
    rep = check_spine(system, objects, maps, max_length)
    if not rep.ok:
        err = MalformedMap("labelling relation fails on " + ", ".join(map(str, sorted(rep.failures, key=repr))))
        err.report = rep
        raise err
    return {t: simplex_of_tuple(objects, maps, t) for t in system.all_tuples(max_length)}


def restrict_to_top(family: Mapping) -> dict:
    """Inverse of extend_spine: read the top label of each simplex."""
    out = {}
    for t, s in family.items():
        if len(t) >= 2:
            out[t] = s.label(tuple(range(len(t))))
    return out
