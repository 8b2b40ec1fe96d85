"""Combinatorics of standard simplices, horns, subdivisions and prisms.

Faces of Delta[p] are strictly increasing tuples of vertices.  The pair
subdivision has one cell per inclusion tau <= sigma of faces, of dimension
|sigma| - |tau|.  Prism simplices are monotone lattice paths in the
(p+1) x 2 grid that underlies Delta[p] x Delta[1].

Everything here is a pure function; outputs are in lexicographic order so
they can be compared byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Sequence

from .errors import InvalidDimension, InvalidIndex, InvalidInput


@dataclass(frozen=True, order=True)
class Face:
    vertices: tuple
    ambient: int

    def __post_init__(self):
        v = tuple(self.vertices)
        object.__setattr__(self, "vertices", v)
        if not v:
            raise InvalidInput("a face must be nonempty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise InvalidInput(f"face {v} is not strictly increasing")
        if v[0] < 0 or v[-1] > self.ambient:
            raise InvalidInput(f"face {v} does not fit in Delta[{self.ambient}]")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self.vertices

    def issubset(self, other: "Face") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def __str__(self):
        return "{" + "".join(map(str, self.vertices)) + "}" if self.ambient < 10 else str(self.vertices)


@dataclass(frozen=True, order=True)
class PrismSimplex:
    path: tuple

    def __post_init__(self):
        path = tuple(tuple(x) for x in self.path)
        object.__setattr__(self, "path", path)
        for (i, j) in path:
            if i < 0 or j not in (0, 1):
                raise InvalidInput(f"bad prism vertex {(i, j)}")
        for (a, b) in zip(path, path[1:]):
            if not (b[0] >= a[0] and b[1] >= a[1] and b != a):
                raise InvalidInput(f"prism path {path} is not strictly increasing")

    @property
    def dim(self) -> int:
        return len(self.path) - 1

    def vertical_steps(self) -> int:
        return sum(1 for a, b in zip(self.path, self.path[1:]) if a[0] == b[0])


@dataclass(frozen=True, order=True)
class PairCell:
    tau: Face
    sigma: Face

    def __post_init__(self):
        if self.tau.ambient != self.sigma.ambient:
            raise InvalidInput("pair cell faces live in different simplices")
        if not self.tau.issubset(self.sigma):
            raise InvalidInput(f"{self.tau} is not contained in {self.sigma}")

    @property
    def dim(self) -> int:
        return len(self.sigma) - len(self.tau)


@dataclass
class CellChain:
    terms: dict = field(default_factory=dict)

    def add(self, cell: PairCell, coeff: int) -> None:
        c = self.terms.get(cell, 0) + coeff
        if c:
            self.terms[cell] = c
        else:
            self.terms.pop(cell, None)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())


def _check_dim(p):
    if p < 0:
        raise InvalidDimension(f"negative dimension {p}")


def enumerate_faces(p: int, k: int) -> list[Face]:
    _check_dim(p)
    if k < 0 or k > p:
        raise InvalidDimension(f"no {k}-faces in Delta[{p}]")
    return [Face(c, p) for c in combinations(range(p + 1), k + 1)]


def all_faces(p: int) -> list[Face]:
    """Every nonempty face of Delta[p], by dimension then lexicographically."""
    return [f for k in range(p + 1) for f in enumerate_faces(p, k)]


def horn_simplices(p: int, i: int) -> list[Face]:
    """Nondegenerate faces F of Delta[p] with F u {i} != [p].

    For p = 1, i = 0 this gives {0} alone: {1} together with the horn vertex
    already covers [1], so the set condition drops it.
    """
    _check_dim(p)
    if i < 0 or i > p:
        raise InvalidIndex(f"horn index {i} out of range for Delta[{p}]")
    full = set(range(p + 1))
    return [f for f in all_faces(p) if set(f.vertices) | {i} != full]


def prism_simplices(p: int, q: int) -> list[PrismSimplex]:
    _check_dim(p)
    if q < 0 or q > p + 1:
        return []
    grid = [(i, j) for i in range(p + 1) for j in (0, 1)]
    out = []

    def extend(path):
        if len(path) == q + 1:
            out.append(PrismSimplex(tuple(path)))
            return
        a = path[-1]
        for b in grid:
            if b[0] >= a[0] and b[1] >= a[1] and b != a:
                extend(path + [b])

    for v in grid:
        extend([v])
    return sorted(out)


def prism_top(p: int) -> list[PrismSimplex]:
    """The p+1 top simplices of Delta[p] x Delta[1], ordered by where the vertical step sits."""
    _check_dim(p)
    out = []
    for m in range(p + 1):
        path = [(i, 0) for i in range(m + 1)] + [(i, 1) for i in range(m, p + 1)]
        out.append(PrismSimplex(tuple(path)))
    return out


def pair_cells(p: int) -> list[PairCell]:
    faces = all_faces(p)
    cells = [PairCell(t, s) for s in faces for t in faces if t.issubset(s)]
    return sorted(cells, key=lambda c: (c.dim, c.tau.vertices, c.sigma.vertices))


def pair_boundary(c: PairCell) -> CellChain:
    """Cellular boundary of a pair cell.

    The sigma part deletes vertices of sigma outside tau with the usual
    alternating sign.  The tau part inserts a vertex of sigma into tau, signed
    by the position of the new vertex.  Its global factor is (-1)^dim(sigma):
    with these incidences a (-1)^dim(tau) factor does not square to zero.
    """
    out = CellChain()
    tau, sigma = c.tau, c.sigma
    p = tau.ambient
    for pos, v in enumerate(sigma.vertices):
        if v in tau:
            continue
        s2 = Face(tuple(x for x in sigma.vertices if x != v), p)
        out.add(PairCell(tau, s2), (-1) ** pos)
    glob = (-1) ** sigma.dim
    for v in sigma.vertices:
        if v in tau:
            continue
        t2 = tuple(sorted(tau.vertices + (v,)))
        out.add(PairCell(Face(t2, p), sigma), glob * (-1) ** t2.index(v))
    return out


def boundary_of_chain(ch: CellChain) -> CellChain:
    out = CellChain()
    for cell, a in ch.terms.items():
        for c2, b in pair_boundary(cell).terms.items():
            out.add(c2, a * b)
    return out


def bary_flags(p: int, q: int) -> tuple[int, list[tuple[Face, ...]]]:
    """Strictly increasing chains S_0 < ... < S_q of nonempty faces of Delta[p]."""
    _check_dim(p)
    if q < 0:
        raise InvalidDimension("flag length must be nonnegative")
    faces = all_faces(p)
    out = []

    def extend(chain):
        if len(chain) == q + 1:
            out.append(tuple(chain))
            return
        last = set(chain[-1].vertices)
        for f in faces:
            if last < set(f.vertices):
                extend(chain + [f])

    for f in faces:
        extend([f])
    out.sort(key=lambda ch: [f.vertices for f in ch])
    return len(out), out


def bary_count(p: int, q: int) -> int:
    """Closed-form count of q-flags, summing over the sizes of the top face."""
    # choose the top face of size n, then a strict chain of q proper nonempty
    # subsets below it; count surjections onto q+1 ordered blocks
    total = 0
    for n in range(1, p + 2):
        total += comb(p + 1, n) * _ordered_set_partitions(n, q + 1)
    return total


def _ordered_set_partitions(n: int, k: int) -> int:
    # a chain S_0 < ... < S_{k-1} = [n] is an ordered partition of [n] into
    # k nonempty blocks S_0, S_1 - S_0, ...
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1))


def components(vertices: Iterable, edges: Iterable) -> list[list]:
    """Connected components by union-find; each block sorted, blocks sorted by first element."""
    verts = list(vertices)
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = tuple(e)
        if a not in parent or b not in parent:
            raise InvalidInput(f"edge {e} has an endpoint that is not a vertex")
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    blocks: dict = {}
    for v in verts:
        blocks.setdefault(find(v), []).append(v)
    out = [sorted(b, key=repr) for b in blocks.values()]
    return sorted(out, key=lambda b: repr(b[0]))


def euler_characteristic(p: int) -> int:
    return sum((-1) ** c.dim for c in pair_cells(p))


def sign(n: int) -> int:
    return -1 if n % 2 else 1


# ---------------------------------------------------------------------------
# tuple systems: the simplices of a nerve-like simplicial set

class TupleSystem:
    """Simplices of a simplicial set presented as vertex tuples.

    A tuple is a simplex when ``valid`` accepts it; validity is closed under
    deleting entries and under repeating adjacent entries.  Face maps delete
    an entry, degeneracies repeat one.  A simplex is nondegenerate when no two
    adjacent entries agree.

    Three front ends are provided: the Cech nerve of a cover (any ordering of
    a present subset, repeats allowed), a finite ordered simplicial complex
    such as Delta[n] (weakly increasing tuples), and the product of either
    with Delta[1] (pairs (vertex, j) with j weakly increasing).
    """

    def __init__(self, vertices: Sequence, valid: Callable[[tuple], bool], kind: str = "custom"):
        self.vertices = list(vertices)
        self._valid = valid
        self.kind = kind

    def valid(self, t: Sequence) -> bool:
        t = tuple(t)
        return len(t) > 0 and all(v in self._vset for v in t) and self._valid(t)

    @property
    def _vset(self):
        s = getattr(self, "_vset_cache", None)
        if s is None:
            s = self._vset_cache = set(self.vertices)
        return s

    @staticmethod
    def nondegenerate(t: Sequence) -> bool:
        return all(a != b for a, b in zip(t, t[1:]))

    def tuples(self, length: int, nondegenerate: bool = True) -> list[tuple]:
        """All simplices with ``length`` entries, in vertex order."""
        out = []

        def extend(t):
            if len(t) == length:
                out.append(t)
                return
            for v in self.vertices:
                if nondegenerate and t and t[-1] == v:
                    continue
                t2 = t + (v,)
                if self._valid(t2):
                    extend(t2)

        if length > 0:
            extend(())
        return out

    def all_tuples(self, max_length: int, nondegenerate: bool = True) -> list[tuple]:
        return [t for n in range(1, max_length + 1) for t in self.tuples(n, nondegenerate)]

    def top_length(self, cap: int = 64) -> int:
        """Length of the longest nondegenerate simplex, or ``cap`` if unbounded."""
        n = 1
        while n < cap and self.tuples(n + 1):
            n += 1
        return n

    def product_with_interval(self) -> "TupleSystem":
        verts = [(v, j) for v in self.vertices for j in (0, 1)]
        base = self

        def valid(t):
            js = [x[1] for x in t]
            if any(b < a for a, b in zip(js, js[1:])):
                return False
            return base.valid(tuple(x[0] for x in t))

        return TupleSystem(verts, valid, kind="product")

    def __repr__(self):
        return f"TupleSystem({self.kind}, {len(self.vertices)} vertices)"


def _down_closure(sets) -> set:
    out = set()
    for s in sets:
        s = list(s)
        for k in range(1, len(s) + 1):
            out.update(frozenset(c) for c in combinations(s, k))
    return out


def cech_system(indices: Sequence, nerve: Iterable[Iterable]) -> TupleSystem:
    """Cech nerve of a cover: any tuple whose underlying set is present.

    The nerve is closed downward, so listing the maximal sets is enough.
    """
    present = _down_closure(nerve)
    for a in indices:
        present.add(frozenset([a]))
    S = TupleSystem(indices, lambda t: frozenset(t) in present, kind="cech")
    S._spec = {"type": "cech", "indices": list(indices), "nerve": [list(s) for s in nerve]}
    return S


def ordered_system(vertices: Sequence, faces: Iterable[Iterable] | None = None) -> TupleSystem:
    """A finite ordered simplicial complex; ``faces=None`` means the full simplex."""
    order = {v: k for k, v in enumerate(vertices)}
    if faces is None:
        def valid(t):
            return all(order[a] <= order[b] for a, b in zip(t, t[1:]))
    else:
        present = _down_closure(faces) | {frozenset([v]) for v in vertices}

        def valid(t):
            return all(order[a] <= order[b] for a, b in zip(t, t[1:])) and frozenset(t) in present
    S = TupleSystem(vertices, valid, kind="ordered")
    S._spec = {"type": "ordered", "vertices": list(vertices),
               "faces": None if faces is None else [list(f) for f in faces]}
    return S


def simplex_system(n: int) -> TupleSystem:
    S = ordered_system(list(range(n + 1)))
    S._spec = {"type": "simplex", "n": n}
    return S


def face_tuple(t: Sequence, i: int) -> tuple:
    t = tuple(t)
    return t[:i] + t[i + 1:]


def degeneracy_tuple(t: Sequence, i: int) -> tuple:
    t = tuple(t)
    return t[: i + 1] + t[i:]


def reduce_tuple(t: Sequence) -> tuple:
    """Collapse adjacent repeats: the nondegenerate simplex underlying t."""
    out = []
    for v in t:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)
