"""Bounded cochain complexes of finite-dimensional vector spaces.

Conventions used throughout the package:

* ``d`` raises degree; ``C.d(n)`` is the matrix C^n -> C^{n+1}.
* A graded map f of degree p has components f^m : C^m -> D^{m+p}.
* The hom differential is (df)^m = f^{m+1} d_C + (-1)^(p+1) d_D f^m.
* ``shift(C, p)^n = C^{n+p}``.
* Homotopies are oriented so that dh = (composite) - (identity).
* An elementary complex is a sum of identity spans M -> M placed in degrees
  (n, n+1); its declaration lists the (dim M, n) pairs in summand order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg as la
from .errors import (CompositionError, MalformedMap, NoInverse, NotElementary,
                     NotSplittable, UnsupportedShape, WrongDegree)


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


class Complex:
    """A bounded cochain complex over an exact field."""

    __slots__ = ("K", "dims", "diffs", "lo", "hi")

    def __init__(self, K, dims: dict, diffs: dict | None = None, check: bool = True):
        self.K = K
        self.dims = {int(n): int(r) for n, r in dims.items() if r}
        if any(r < 0 for r in self.dims.values()):
            raise MalformedMap("negative dimension in complex")
        if self.dims:
            self.lo, self.hi = min(self.dims), max(self.dims)
        else:
            self.lo, self.hi = 0, -1
        diffs = diffs or {}
        self.diffs = {}
        for n in range(self.lo, self.hi):
            D = diffs.get(n)
            shape = (self.dim(n + 1), self.dim(n))
            if D is None:
                D = la.zeros(*shape, K)
            if D.shape != shape:
                raise MalformedMap(f"differential d^{n} has shape {D.shape}, expected {shape}")
            if shape[0] and shape[1]:
                self.diffs[n] = D.to_dense()
        for n, D in diffs.items():
            if (n < self.lo or n >= self.hi) and not la.is_zero(D):
                raise MalformedMap(f"differential d^{n} outside the support")
        if check:
            for n in range(self.lo, self.hi - 1):
                if not la.is_zero(self.d(n + 1) * self.d(n)):
                    raise MalformedMap(f"d^{n + 1} d^{n} != 0")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int):
        D = self.diffs.get(n)
        if D is None:
            return la.zeros(self.dim(n + 1), self.dim(n), self.K)
        return D

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Complex):
            return NotImplemented
        if self.K != other.K or self.dims != other.dims:
            return False
        return all(la.equal(self.d(n), other.d(n)) for n in range(self.lo, self.hi))

    def __hash__(self):
        return hash((tuple(sorted(self.dims.items())),))

    def __repr__(self):
        dims = ",".join(f"{n}:{r}" for n, r in sorted(self.dims.items()))
        return f"Complex({{{dims}}})"

    @classmethod
    def zero(cls, K) -> "Complex":
        return cls(K, {})

    @classmethod
    def concentrated(cls, K, dim: int, degree: int = 0) -> "Complex":
        return cls(K, {degree: dim})


class GradedMap:
    """A homogeneous map of graded spaces: f^m : source^m -> target^(m+degree)."""

    __slots__ = ("source", "target", "degree", "comps")

    def __init__(self, source: Complex, target: Complex, degree: int, comps: dict | None = None):
        if source.K != target.K:
            raise MalformedMap("source and target live over different fields")
        self.source, self.target, self.degree = source, target, int(degree)
        self.comps = {}
        for m, M in (comps or {}).items():
            shape = (target.dim(m + degree), source.dim(m))
            if M.shape != shape:
                raise MalformedMap(f"component f^{m} has shape {M.shape}, expected {shape}")
            if shape[0] and shape[1]:
                self.comps[m] = M.to_dense()

    @property
    def K(self):
        return self.source.K

    def at(self, m: int):
        M = self.comps.get(m)
        if M is None:
            return la.zeros(self.target.dim(m + self.degree), self.source.dim(m), self.K)
        return M

    def is_zero(self) -> bool:
        return all(la.is_zero(M) for M in self.comps.values())

    def nnz(self) -> int:
        return sum(la.nnz(M) for M in self.comps.values())

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.degree != other.degree or not (_same(self.source, other.source) and _same(self.target, other.target)):
            return False
        for m in self.comps.keys() | other.comps.keys():
            A, B = self.comps.get(m), other.comps.get(m)
            if A is None or B is None:
                if not la.is_zero(A if B is None else B):
                    return False
            elif A != B:
                return False
        return True

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"GradedMap(deg {self.degree}, {self.source!r} -> {self.target!r})"

    @classmethod
    def zero(cls, source: Complex, target: Complex, degree: int = 0) -> "GradedMap":
        return cls(source, target, degree)

    @classmethod
    def identity(cls, C: Complex) -> "GradedMap":
        return cls(C, C, 0, {n: la.eye(C.dim(n), C.K) for n in C.degrees})

    @classmethod
    def differential(cls, C: Complex) -> "GradedMap":
        return cls(C, C, 1, {n: C.d(n) for n in C.degrees})


def _same(A: Complex, B: Complex) -> bool:
    return A is B or A == B


def identity(C: Complex) -> GradedMap:
    return GradedMap.identity(C)


def zero_map(source: Complex, target: Complex, degree: int = 0) -> GradedMap:
    return GradedMap(source, target, degree)


# ---------------------------------------------------------------------------
# graded map algebra

def hom_differential(f: GradedMap) -> GradedMap:
    C, D, p = f.source, f.target, f.degree
    s = _sgn(p + 1)
    out = {}
    for m in C.degrees:
        if not D.dim(m + p + 1):
            continue
        M = f.at(m + 1) * C.d(m)
        if s > 0:
            M = M + D.d(m + p) * f.at(m)
        else:
            M = M - D.d(m + p) * f.at(m)
        out[m] = M
    return GradedMap(C, D, p + 1, out)


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g o f (apply f first)."""
    if f.target is not g.source and f.target != g.source:
        raise CompositionError("target of the first map is not the source of the second")
    p, q = f.degree, g.degree
    out = {}
    for m, F in f.comps.items():
        G = g.comps.get(m + p)
        if G is not None:
            out[m] = G * F
    return GradedMap(f.source, g.target, p + q, out)


def compose_all(*maps: GradedMap) -> GradedMap:
    """compose_all(a, b, c) = a o b o c."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        out = compose(g, out)
    return out


def add(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.degree != g.degree or not (_same(f.source, g.source) and _same(f.target, g.target)):
        raise CompositionError("cannot add maps of different type")
    out = dict(f.comps)
    for m, G in g.comps.items():
        out[m] = out[m] + G if m in out else G
    return GradedMap(f.source, f.target, f.degree, out)


def add_all(maps: Iterable[GradedMap], source=None, target=None, degree=None) -> GradedMap:
    maps = list(maps)
    if not maps:
        return GradedMap(source, target, degree)
    out = maps[0]
    for g in maps[1:]:
        out = add(out, g)
    return out


def scale(f: GradedMap, c) -> GradedMap:
    c = la.scalar(f.K, c)
    return GradedMap(f.source, f.target, f.degree, {m: M * c for m, M in f.comps.items()})


def is_chain_map(f: GradedMap) -> bool:
    if f.degree != 0:
        raise WrongDegree("a chain map has degree 0")
    return hom_differential(f).is_zero()


# ---------------------------------------------------------------------------
# homology

def cycles(C: Complex, n: int):
    return la.kernel(C.d(n)) if C.dim(n) else la.zeros(0, 0, C.K)


def boundaries(C: Complex, n: int):
    return la.column_space(C.d(n - 1)) if C.dim(n) else la.zeros(0, 0, C.K)


def homology(C: Complex, n: int):
    """(dim H^n, cycle representatives as columns)."""
    Z = cycles(C, n)
    B = boundaries(C, n)
    reps = la.extend_basis(B, Z)
    return reps.shape[1], reps


def betti(C: Complex) -> dict:
    return {n: homology(C, n)[0] for n in C.degrees if homology(C, n)[0]}


def is_acyclic(C: Complex) -> bool:
    return all(la.rank(C.d(n - 1)) + la.rank(C.d(n)) == C.dim(n) for n in C.degrees)


def induced_on_homology(f: GradedMap, n: int):
    """Matrix of H^n(f) in the representative bases returned by ``homology``."""
    A, B = f.source, f.target
    ha, ra = homology(A, n)
    hb, rb = homology(B, n)
    if ha == 0 or hb == 0:
        return la.zeros(hb, ha, A.K)
    img = f.at(n) * ra
    bnd = boundaries(B, n)
    sol = la.solve(la.hstack([bnd, rb]), img)
    if sol is None:
        raise MalformedMap("image of a cycle is not a cycle")
    return la.sub(sol, range(bnd.shape[1], bnd.shape[1] + hb), range(ha))


def is_quasi_iso(f: GradedMap) -> bool:
    if not is_chain_map(f):
        return False
    degs = set(f.source.degrees) | set(f.target.degrees)
    for n in degs:
        M = induced_on_homology(f, n)
        if M.shape[0] != M.shape[1] or la.rank(M) != M.shape[0]:
            return False
    return True


def is_iso(f: GradedMap) -> bool:
    """Chain map invertible in every degree."""
    if not is_chain_map(f):
        return False
    degs = set(f.source.degrees) | set(f.target.degrees)
    for n in degs:
        M = f.at(n)
        if M.shape[0] != M.shape[1] or la.rank(M) != M.shape[0]:
            return False
    return True


def inverse_map(f: GradedMap) -> GradedMap:
    """Degreewise inverse of an invertible degree-0 map."""
    if f.degree != 0:
        raise WrongDegree("only degree-0 maps can be inverted")
    out = {}
    for n in set(f.source.degrees) | set(f.target.degrees):
        Minv = la.inverse(f.at(n))
        if Minv is None:
            raise NoInverse(f"component in degree {n} is not invertible")
        out[n] = Minv
    return GradedMap(f.target, f.source, 0, out)


def mapping_cone(f: GradedMap) -> Complex:
    """Cone(f)^n = A^{n+1} + B^n with d(a, b) = (-d a, f a + d b)."""
    A, B = f.source, f.target
    K = A.K
    lo = min(A.lo - 1, B.lo)
    hi = max(A.hi - 1, B.hi)
    dims = {n: A.dim(n + 1) + B.dim(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = la.block([[-A.d(n + 1), la.zeros(A.dim(n + 2), B.dim(n), K)],
                             [f.at(n + 1), B.d(n)]])
    return Complex(K, dims, diffs)


# ---------------------------------------------------------------------------
# constructions

def direct_sum(Cs: Sequence[Complex], K=None) -> Complex:
    Cs = list(Cs)
    if not Cs:
        return Complex(K, {})
    K = Cs[0].K
    degs = sorted(set(n for C in Cs for n in C.degrees))
    dims = {n: sum(C.dim(n) for C in Cs) for n in degs}
    diffs = {n: la.block_diag([C.d(n) for C in Cs], K) for n in degs}
    return Complex(K, dims, diffs, check=False)


def direct_sum_maps(fs: Sequence[GradedMap]) -> GradedMap:
    src = direct_sum([f.source for f in fs])
    tgt = direct_sum([f.target for f in fs])
    deg = fs[0].degree
    if any(f.degree != deg for f in fs):
        raise CompositionError("summands of different degree")
    out = {m: la.block_diag([f.at(m) for f in fs], src.K) for m in src.degrees}
    return GradedMap(src, tgt, deg, out)


def _offsets(Cs: Sequence[Complex], n: int, i: int) -> tuple[int, int]:
    start = sum(C.dim(n) for C in Cs[:i])
    return start, start + Cs[i].dim(n)


def inclusion(Cs: Sequence[Complex], i: int, total: Complex | None = None) -> GradedMap:
    total = total or direct_sum(Cs)
    K = total.K
    out = {}
    for n in Cs[i].degrees:
        a, b = _offsets(Cs, n, i)
        M = la.zeros(total.dim(n), Cs[i].dim(n), K)
        rows = [[K.one if r == a + c else K.zero for c in range(b - a)] for r in range(total.dim(n))]
        out[n] = la.DomainMatrix(rows, M.shape, K) if M.shape[0] and M.shape[1] else M
    return GradedMap(Cs[i], total, 0, out)


def projection(Cs: Sequence[Complex], i: int, total: Complex | None = None) -> GradedMap:
    total = total or direct_sum(Cs)
    inc = inclusion(Cs, i, total)
    return GradedMap(total, Cs[i], 0, {n: M.transpose() for n, M in inc.comps.items()})


def block_map(blocks: Sequence[Sequence[GradedMap | None]], sources: Sequence[Complex],
              targets: Sequence[Complex], degree: int = 0) -> GradedMap:
    """Assemble a map between direct sums from its blocks (None means zero)."""
    src, tgt = direct_sum(sources), direct_sum(targets)
    K = src.K
    out = {}
    for m in src.degrees:
        rows = []
        for i, T in enumerate(targets):
            row = []
            for j, S in enumerate(sources):
                b = blocks[i][j]
                if b is None:
                    row.append(la.zeros(T.dim(m + degree), S.dim(m), K))
                else:
                    if b.degree != degree:
                        raise CompositionError("block of the wrong degree")
                    row.append(b.at(m))
            rows.append(row)
        if tgt.dim(m + degree) and src.dim(m):
            out[m] = la.block(rows)
    return GradedMap(src, tgt, degree, out)


def map_block(f: GradedMap, sources: Sequence[Complex], targets: Sequence[Complex], i: int, j: int) -> GradedMap:
    """The (i, j) block of a map between direct sums: target summand i, source summand j."""
    out = {}
    for m in sources[j].degrees:
        r0, r1 = _offsets(targets, m + f.degree, i)
        c0, c1 = _offsets(sources, m, j)
        out[m] = la.sub(f.at(m), range(r0, r1), range(c0, c1))
    return GradedMap(sources[j], targets[i], f.degree, out)


def shift(C: Complex, p: int) -> Complex:
    # no sign twist on d: shifted spans stay identity spans
    dims = {n - p: r for n, r in C.dims.items()}
    diffs = {n - p: C.d(n) for n in C.degrees}
    return Complex(C.K, dims, diffs, check=False)


@dataclass(frozen=True)
class ElementaryDecl:
    summands: tuple = ()

    def __post_init__(self):
        s = tuple((int(a), int(b)) for a, b in self.summands)
        object.__setattr__(self, "summands", s)
        if any(a <= 0 for a, _ in s):
            raise MalformedMap("elementary summands need positive dimension")

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def __add__(self, other: "ElementaryDecl") -> "ElementaryDecl":
        return ElementaryDecl(self.summands + other.summands)

    def total_dim(self) -> int:
        return 2 * sum(a for a, _ in self.summands)


def span(K, dim: int, placement: int) -> Complex:
    return Complex(K, {placement: dim, placement + 1: dim}, {placement: la.eye(dim, K)}, check=False)


def build_elementary(decl: ElementaryDecl | Sequence, K) -> Complex:
    decl = decl if isinstance(decl, ElementaryDecl) else ElementaryDecl(tuple(decl))
    return direct_sum([span(K, a, n) for a, n in decl], K)


def _span_positions(decl: ElementaryDecl, n: int) -> list[tuple[int, int, int]]:
    """(summand index, start, stop) of each summand's block in degree n."""
    pos, out = 0, []
    for idx, (a, p) in enumerate(decl):
        if p == n or p + 1 == n:
            out.append((idx, pos, pos + a))
            pos += a
    return out


def elementary_morphism(E: Complex, declE: ElementaryDecl | None, F: Complex, declF: ElementaryDecl | None,
                        k: int = 0) -> GradedMap:
    """Maximal sum of identity morphisms between common summands E -> F.

    Summands are matched greedily in declaration order by (dimension,
    placement); the map is zero for k != 0.
    """
    if declE is None or declF is None:
        raise NotElementary("elementary declarations are required")
    if k != 0:
        return GradedMap(E, F, k)
    used = set()
    match = {}
    for i, s in enumerate(declE):
        for j, t in enumerate(declF):
            if j not in used and s == t:
                used.add(j)
                match[i] = j
                break
    K = E.K
    out = {}
    for n in E.degrees:
        rows = [[K.zero] * E.dim(n) for _ in range(F.dim(n))]
        fpos = {idx: (a, b) for idx, a, b in _span_positions(declF, n)}
        for idx, a, b in _span_positions(declE, n):
            if idx in match:
                c, _ = fpos[match[idx]]
                for r in range(b - a):
                    rows[c + r][a + r] = K.one
        if F.dim(n) and E.dim(n):
            out[n] = la.DomainMatrix(rows, (F.dim(n), E.dim(n)), K)
    return GradedMap(E, F, 0, out)


def is_elementary(C: Complex, strict: bool = False) -> bool:
    if not is_acyclic(C):
        return False
    if strict:
        return all(la.is_partial_permutation(C.d(n)) for n in range(C.lo, C.hi))
    return True


def elementary_contraction(decl: ElementaryDecl, K) -> GradedMap:
    """h = -id from the top of each span to its bottom; dh = -id."""
    E = build_elementary(decl, K)
    out = {}
    for n in E.degrees:
        rows = [[K.zero] * E.dim(n) for _ in range(E.dim(n - 1))]
        top = {idx: (a, b) for idx, a, b in _span_positions(decl, n)}
        bot = {idx: (a, b) for idx, a, b in _span_positions(decl, n - 1)}
        for idx, (_, p) in enumerate(decl):
            if p + 1 == n:
                a, b = top[idx]
                c, _ = bot[idx]
                for r in range(b - a):
                    rows[c + r][a + r] = -K.one
        if E.dim(n - 1) and E.dim(n):
            out[n] = la.DomainMatrix(rows, (E.dim(n - 1), E.dim(n)), K)
    return GradedMap(E, E, -1, out)


def summand_contraction(C: Complex, decl: ElementaryDecl) -> tuple[Complex, GradedMap, GradedMap, GradedMap]:
    """For C + El(decl): (total, inclusion, projection, h) with dh = i p - id."""
    E = build_elementary(decl, C.K)
    total = direct_sum([C, E])
    i = inclusion([C, E], 0, total)
    p = projection([C, E], 0, total)
    hE = elementary_contraction(decl, C.K)
    h = block_map([[None, None], [None, hE]], [C, E], [C, E], degree=-1)
    return total, i, p, h


def summand_homotopy(C: Complex, E: Complex):
    """Inclusion, projection and homotopy for C -> C + E, E a single span in degrees 0, 1.

    The homotopy is (0, -id_M) from degree 1 to degree 0 and zero elsewhere;
    it satisfies dh = i p - id.
    """
    if E.dims.keys() != {0, 1} or E.dim(0) != E.dim(1) or not la.equal(E.d(0), la.eye(E.dim(0), E.K)):
        raise UnsupportedShape("expected a single identity span in degrees 0 and 1")
    _, i, p, h = summand_contraction(C, ElementaryDecl(((E.dim(0), 0),)))
    return i, p, h


def split_acyclic(C: Complex) -> tuple[ElementaryDecl, GradedMap]:
    """An elementary complex with an isomorphism onto C (C acyclic)."""
    if not is_acyclic(C):
        raise NotSplittable("complex is not acyclic")
    K = C.K
    L = {}
    for n in C.degrees:
        Z = cycles(C, n)
        L[n] = la.complement(Z, C.dim(n))
    decl = ElementaryDecl(tuple((L[n].shape[1], n) for n in C.degrees if L[n].shape[1]))
    E = build_elementary(decl, K)
    out = {}
    for n in E.degrees:
        cols = []
        for idx, (a, p) in enumerate(decl):
            if p == n:
                cols.append(L[n])
            elif p + 1 == n:
                cols.append(C.d(p) * L[p])
        out[n] = la.hstack(cols) if cols else la.zeros(C.dim(n), 0, K)
    return decl, GradedMap(E, C, 0, out)


def contraction(C: Complex) -> GradedMap:
    """A degree -1 map h on an acyclic C with dh = -id."""
    decl, psi = split_acyclic(C)
    hE = elementary_contraction(decl, C.K)
    return compose_all(psi, hE, inverse_map(psi))


# ---------------------------------------------------------------------------
# strictification and homotopy inverses

@dataclass
class Strictification:
    """f_tilde : B + E_B -> A + E_A, an isomorphism restricting to f on B."""

    f: GradedMap
    decl_A: ElementaryDecl
    decl_B: ElementaryDecl
    A_tilde: Complex
    B_tilde: Complex
    f_tilde: GradedMap
    f_tilde_inv: GradedMap

    @property
    def E_A(self) -> Complex:
        return build_elementary(self.decl_A, self.f.K)

    @property
    def E_B(self) -> Complex:
        return build_elementary(self.decl_B, self.f.K)

    def check(self) -> dict:
        """Matrix-arithmetic self-check of the four postconditions."""
        f = self.f
        A, B, EA, EB = f.target, f.source, self.E_A, self.E_B
        iB = inclusion([B, EB], 0, self.B_tilde)
        iA = inclusion([A, EA], 0, self.A_tilde)
        pA = projection([A, EA], 0, self.A_tilde)
        restricted = compose(self.f_tilde, iB)
        return {
            "i_elementary": is_elementary(EA) and is_elementary(EB),
            "ii_padding": self.A_tilde == direct_sum([A, EA]) and self.B_tilde == direct_sum([B, EB]),
            "iii_isomorphism": is_chain_map(self.f_tilde)
            and compose(self.f_tilde, self.f_tilde_inv) == identity(self.A_tilde)
            and compose(self.f_tilde_inv, self.f_tilde) == identity(self.B_tilde),
            "iv_restriction": compose(pA, restricted) == f,
            "iv_strict": restricted == compose(iA, f),
        }


def strictify_map(f: GradedMap) -> Strictification:
    if f.degree != 0 or not is_quasi_iso(f):
        raise NoInverse("strictification needs a quasi-isomorphism")
    B, A = f.source, f.target
    K = A.K
    degs = sorted(set(A.degrees) | set(B.degrees))

    # pad B so that the map becomes surjective; a span placed in degree n-1
    # already covers d(Q^{n-1}) in degree n, so Q^n only completes the rest
    Q, piv, dsel = {}, {}, {}
    for n in degs:
        Fn = f.at(n)
        prev = Q.get(n - 1)
        dq = A.d(n - 1) * prev if prev is not None and prev.shape[1] and A.dim(n) else la.zeros(A.dim(n), 0, K)
        M = la.hstack([Fn, dq])
        if M.shape[0] and M.shape[1]:
            _, pv = M.rref()
            pv = list(pv)
        else:
            pv = []
        piv[n] = [c for c in pv if c < B.dim(n)]
        dsel[n] = [c - B.dim(n) for c in pv if c >= B.dim(n)]
        Q[n] = la.complement(la.sub(M, range(M.shape[0]), pv), A.dim(n))
    decl_B = ElementaryDecl(tuple((Q[n].shape[1], n) for n in degs if Q[n].shape[1]))
    EB = build_elementary(decl_B, K)
    Bt = direct_sum([B, EB])
    Fcomps = {}
    for n in Bt.degrees:
        cols = [f.at(n)]
        for (a, p) in decl_B:
            if p == n:
                cols.append(Q[n])
            elif p + 1 == n:
                cols.append(A.d(p) * Q[p])
        Fcomps[n] = la.hstack(cols) if cols else la.zeros(A.dim(n), 0, K)
    F = GradedMap(Bt, A, 0, Fcomps)

    # the kernel of F is acyclic
    Kb = {n: la.kernel(F.at(n)) for n in Bt.degrees}
    kdims = {n: M.shape[1] for n, M in Kb.items()}
    kdiffs = {}
    for n in Bt.degrees:
        if kdims.get(n) and kdims.get(n + 1):
            sol = la.solve(Kb[n + 1], Bt.d(n) * Kb[n])
            kdiffs[n] = sol
    Kc = Complex(K, kdims, kdiffs)
    incK = GradedMap(Kc, Bt, 0, {n: Kb[n] for n in Kc.degrees})
    decl_A, psi = split_acyclic(Kc)
    hK = contraction(Kc)

    # a graded section of F, then corrected into a chain map
    def unit(pos, n):
        e = [[K.one if r == pos else K.zero] for r in range(Bt.dim(n))]
        return la.DomainMatrix(e, (Bt.dim(n), 1), K)

    s = {}
    for n in degs:
        prev = Q.get(n - 1)
        dq = A.d(n - 1) * prev if prev is not None and prev.shape[1] and A.dim(n) else la.zeros(A.dim(n), 0, K)
        rows = range(A.dim(n))
        P = la.hstack([la.sub(f.at(n), rows, piv[n]), la.sub(dq, rows, dsel[n]), Q[n]])
        S_cols = [unit(j, n) for j in piv[n]]
        start = B.dim(n)
        spans = {decl_B.summands[idx][1]: (a, b) for idx, a, b in _span_positions(decl_B, n)}
        if n - 1 in spans:
            a, _ = spans[n - 1]
            S_cols += [unit(start + a + k, n) for k in dsel[n]]
        if n in spans:
            a, b = spans[n]
            S_cols += [unit(start + r, n) for r in range(a, b)]
        S = la.hstack(S_cols) if S_cols else la.zeros(Bt.dim(n), 0, K)
        s[n] = S * la.inverse(P) if A.dim(n) else la.zeros(Bt.dim(n), 0, K)
    sec = GradedMap(A, Bt, 0, s)
    c = compose(GradedMap.differential(Bt), sec) - compose(sec, GradedMap.differential(A))
    # c lands in K; express it in the kernel basis
    cK = {}
    for n, M in c.comps.items():
        sol = la.solve(Kb[n + 1], M) if Kc.dim(n + 1) else None
        if sol is None:
            if la.is_zero(M):
                continue
            raise NoInverse("section defect left the kernel")
        cK[n] = sol
    cKmap = GradedMap(A, Kc, 1, cK)
    sec2 = sec + compose_all(incK, hK, cKmap)

    # Phi : A + K -> B_tilde and its inverse
    Phi = block_map([[sec2, incK]], [A, Kc], [Bt])
    proj_to_K = {}
    for n in Kc.degrees:
        X = la.eye(Bt.dim(n), K) - sec2.at(n) * F.at(n)
        proj_to_K[n] = la.solve(Kb[n], X)
    kappa = GradedMap(Bt, Kc, 0, proj_to_K)
    Phi_inv = block_map([[F], [kappa]], [Bt], [A, Kc])

    EA = build_elementary(decl_A, K)
    At = direct_sum([A, EA])
    psi_inv = inverse_map(psi)
    to_At = block_map([[identity(A), None], [None, psi_inv]], [A, Kc], [A, EA])
    from_At = block_map([[identity(A), None], [None, psi]], [A, EA], [A, Kc])
    f_tilde = compose(to_At, Phi_inv)
    f_tilde_inv = compose(Phi, from_At)
    return Strictification(f, decl_A, decl_B, At, Bt, f_tilde, f_tilde_inv)


def whitehead_inverse(f: GradedMap) -> tuple[GradedMap, GradedMap, GradedMap]:
    """A homotopy inverse g of the quasi-isomorphism f : B -> A.

    Returns (g, hB, hA) with d hB = g f - id_B and d hA = f g - id_A.
    """
    if f.degree != 0 or not is_quasi_iso(f):
        raise NoInverse("not a quasi-isomorphism")
    st = strictify_map(f)
    B, A = f.source, f.target
    _, iB, pB, hBt = summand_contraction(B, st.decl_B)
    _, iA, pA, hAt = summand_contraction(A, st.decl_A)
    g = compose_all(pB, st.f_tilde_inv, iA)
    hB = compose_all(pB, st.f_tilde_inv, hAt, st.f_tilde, iB)
    hA = compose_all(pA, st.f_tilde, hBt, st.f_tilde_inv, iA)
    return g, hB, hA
