"""Seeded random fixtures: complexes, maps, quasi-isomorphisms and MC data.

Random Maurer-Cartan data is produced by homotopy transfer, so it is valid
by construction.  Fix a complex E = B + A with A a sum of identity spans.
Each vertex x keeps a subset S_x of the spans; F_x = B + A|S_x is a
deformation retract of E with inclusion i_x, projection p_x and homotopy
h_x = -id on the discarded spans.  Then

    f_{x_0..x_n} = c_n R_0 p_0 h_1 ... h_{n-1} i_n R_n^{-1}

is an MC element for the right signs c_n, where R_x is a random change of
basis on F_x.  Edges are quasi-isomorphisms since each F_x retracts E.
Each retraction is further moved by a random chain automorphism of E, so
products of several h_x do not vanish and long components are nonzero.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import homalg as ha
from . import linalg as la
from .homalg import Complex, ElementaryDecl, GradedMap


def transfer_sign(n: int) -> int:
    # (-1)^(n(n-1)/2): the pattern 1, -1, -1, 1 repeating
    return -1 if (n * (n - 1) // 2) % 2 else 1


def make_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_complex(rng, K, lo: int = 0, amp: int = 1, maxdim: int = 2, acyclic: bool = False) -> Complex:
    """A random bounded complex with support in [lo, lo+amp]."""
    rng = make_rng(rng)
    hom = {}
    decl = []
    for n in range(lo, lo + amp + 1):
        if not acyclic:
            hom[n] = rng.randint(0, maxdim)
        if n < lo + amp and rng.random() < 0.6:
            decl.append((rng.randint(1, max(1, maxdim - 1)), n))
    C = ha.direct_sum([Complex(K, hom), ha.build_elementary(ElementaryDecl(tuple(decl)), K)], K)
    G, _, _ = random_chain_iso(rng, C)
    return G


def random_chain_iso(rng, C: Complex):
    """A random change of basis R : C -> G; returns (G, R, R^{-1})."""
    rng = make_rng(rng)
    K = C.K
    R = {n: la.random_invertible(rng, C.dim(n), K) for n in C.degrees}
    Rinv = {n: la.inverse(M) for n, M in R.items()}
    diffs = {n: R[n + 1] * C.d(n) * Rinv[n] for n in range(C.lo, C.hi) if C.dim(n) and C.dim(n + 1)}
    G = Complex(K, C.dims, diffs, check=False)
    return G, GradedMap(C, G, 0, R), GradedMap(G, C, 0, Rinv)


def random_graded_map(rng, C: Complex, D: Complex, degree: int, lo: int = -2, hi: int = 2) -> GradedMap:
    rng = make_rng(rng)
    comps = {m: la.random_matrix(rng, D.dim(m + degree), C.dim(m), C.K, lo, hi) for m in C.degrees}
    return GradedMap(C, D, degree, comps)


def random_automorphism(rng, C: Complex, tries: int = 8):
    """A chain automorphism id + dk + kd of C, with k a random degree -1 map."""
    rng = make_rng(rng)
    for _ in range(tries):
        k = random_graded_map(rng, C, C, -1, -1, 1)
        T = ha.identity(C) + ha.hom_differential(k)
        try:
            return T, ha.inverse_map(T)
        except Exception:
            continue
    return ha.identity(C), ha.identity(C)


class TransferModel:
    """Homotopy-transfer data over a set of vertices (see the module docstring)."""

    def __init__(self, rng, K, vertices: Sequence, lo: int = 0, amp: int = 1, maxdim: int = 2,
                 nspans: int | None = None, keep: float = 0.5, conjugate: bool = True,
                 isomorphic: bool = False):
        rng = make_rng(rng)
        self.K = K
        self.B = random_complex(rng, K, lo, amp, maxdim)
        if nspans is None:
            nspans = rng.randint(0, 3)
        places = list(range(lo - 1, lo + amp + 1))
        self.decl = ElementaryDecl(tuple((rng.randint(1, 2), rng.choice(places)) for _ in range(nspans)))
        A = ha.build_elementary(self.decl, K)
        self.E = ha.direct_sum([self.B, A])
        self.keep = {}
        self.F, self.iota, self.pi, self.h, self.R, self.Rinv = {}, {}, {}, {}, {}, {}
        for x in vertices:
            S = [k for k in range(nspans) if isomorphic or rng.random() < keep]
            self.keep[x] = S
            self._build_vertex(rng, x, S, conjugate)

    def _build_vertex(self, rng, x, S, conjugate):
        K = self.K
        decl_S = ElementaryDecl(tuple(self.decl.summands[k] for k in S))
        F = ha.direct_sum([self.B, ha.build_elementary(decl_S, K)])
        # inclusion F -> E: B by identity, kept spans to their slots
        comps = {}
        for n in self.E.degrees:
            rows = [[K.zero] * F.dim(n) for _ in range(self.E.dim(n))]
            for r in range(self.B.dim(n)):
                rows[r][r] = K.one
            epos = {idx: a for idx, a, _ in ha._span_positions(self.decl, n)}
            fpos = {idx: (a, b) for idx, a, b in ha._span_positions(decl_S, n)}
            for j, k in enumerate(S):
                if j in fpos:
                    a, b = fpos[j]
                    for r in range(b - a):
                        rows[self.B.dim(n) + epos[k] + r][self.B.dim(n) + a + r] = K.one
            if self.E.dim(n) and F.dim(n):
                comps[n] = la.DomainMatrix(rows, (self.E.dim(n), F.dim(n)), K)
        iota = GradedMap(F, self.E, 0, comps)
        pi = GradedMap(self.E, F, 0, {n: M.transpose() for n, M in comps.items()})
        # homotopy: -id on the discarded spans
        drop = [k for k in range(len(self.decl)) if k not in S]
        hcomps = {}
        for n in self.E.degrees:
            rows = [[K.zero] * self.E.dim(n) for _ in range(self.E.dim(n - 1))]
            top = {idx: (a, b) for idx, a, b in ha._span_positions(self.decl, n)}
            bot = {idx: a for idx, a, _ in ha._span_positions(self.decl, n - 1)}
            for k in drop:
                if self.decl.summands[k][1] + 1 == n:
                    a, b = top[k]
                    c = bot[k]
                    for r in range(b - a):
                        rows[self.B.dim(n - 1) + c + r][self.B.dim(n) + a + r] = -K.one
            if self.E.dim(n) and self.E.dim(n - 1):
                hcomps[n] = la.DomainMatrix(rows, (self.E.dim(n - 1), self.E.dim(n)), K)
        h = GradedMap(self.E, self.E, -1, hcomps)
        if conjugate:
            T, Tinv = random_automorphism(rng, self.E)
            iota, pi, h = ha.compose(T, iota), ha.compose(pi, Tinv), ha.compose_all(T, h, Tinv)
            G, R, Rinv = random_chain_iso(rng, F)
        else:
            G, R, Rinv = F, ha.identity(F), ha.identity(F)
        self.F[x], self.iota[x], self.pi[x], self.h[x] = G, iota, pi, h
        self.R[x], self.Rinv[x] = R, Rinv

    def objects(self) -> dict:
        return dict(self.F)

    def label(self, t: Sequence) -> GradedMap:
        t = tuple(t)
        n = len(t) - 1
        if n == 0:
            return GradedMap.differential(self.F[t[0]])
        parts = [self.R[t[0]], self.pi[t[0]]]
        parts += [self.h[x] for x in t[1:-1]]
        parts += [self.iota[t[-1]], self.Rinv[t[-1]]]
        f = ha.compose_all(*parts)
        return ha.scale(f, transfer_sign(n)) if transfer_sign(n) < 0 else f

    def labels(self, tuples) -> dict:
        return {t: self.label(t) for t in tuples if len(t) >= 2}


def random_mc_data(rng, K, system, max_length: int | None = None, **kw):
    """(objects, maps) for a random MC labelling of a tuple system."""
    rng = make_rng(rng)
    model = TransferModel(rng, K, system.vertices, **kw)
    if max_length is None:
        max_length = model.E.hi - model.E.lo + 3
    maps = model.labels(system.all_tuples(max_length))
    return model.objects(), maps, model


def random_dg_simplex(rng, K, p: int, **kw):
    from .dg_nerve import simplex_of_tuple
    from .simplex_core import simplex_system
    objs, maps, _ = random_mc_data(rng, K, simplex_system(p), max_length=p + 1, **kw)
    return simplex_of_tuple(objs, maps, tuple(range(p + 1)))


def random_quasi_iso(rng, K, lo: int = 0, amp: int = 1, maxdim: int = 2, **kw) -> GradedMap:
    """A random quasi-isomorphism between two random deformation retracts."""
    model = TransferModel(rng, K, ["a", "b"], lo=lo, amp=amp, maxdim=maxdim, **kw)
    return model.label(("a", "b"))


def random_iso_cocycle(rng, K, vertices, lo=0, amp=1, maxdim=2):
    """Chain isomorphisms phi_ab = R_a R_b^{-1} over a fixed complex; a strict cocycle."""
    rng = make_rng(rng)
    B = random_complex(rng, K, lo, amp, maxdim)
    objs, R, Rinv = {}, {}, {}
    for x in vertices:
        G, Rx, Rxi = random_chain_iso(rng, B)
        objs[x], R[x], Rinv[x] = G, Rx, Rxi
    edges = {(a, b): ha.compose(R[a], Rinv[b]) for a in vertices for b in vertices if a != b}
    return objs, edges


def random_elementary(rng, K, lo: int = 0, amp: int = 1, count: int | None = None):
    rng = make_rng(rng)
    if count is None:
        count = rng.randint(0, 2)
    decl = ElementaryDecl(tuple((rng.randint(1, 2), rng.randint(lo - 1, lo + amp)) for _ in range(count)))
    return ha.build_elementary(decl, K), decl


def random_trivialisation(rng, C: Complex, lo: int = 0, amp: int = 1):
    """A random elementary complement P with theta : C + P -> G a random change of basis."""
    from .gtt import Trivialisation
    rng = make_rng(rng)
    P, decl = random_elementary(rng, C.K, lo, amp)
    G, R, Rinv = random_chain_iso(rng, ha.direct_sum([C, P]))
    return Trivialisation(P, decl, R, Rinv), G


def random_edge_labelling(rng, A: Complex, B: Complex, phi: GradedMap, lo: int = 0, amp: int = 1,
                          perturb: bool = True):
    """A labelling of Delta[1] whose middle map is phi : B -> A padded and moved by random bases."""
    from .gtt import edge_labelling
    rng = make_rng(rng)
    trA, GA = random_trivialisation(rng, A, lo, amp)
    trB, GB = random_trivialisation(rng, B, lo, amp)
    PA, PB = trA.complement, trB.complement
    core = ha.compose_all(ha.inclusion([A, PA], 0), phi, ha.projection([B, PB], 0))
    if perturb:
        k = random_graded_map(rng, core.source, core.target, -1, -1, 1)
        core = core + ha.hom_differential(k)
    mid = ha.compose_all(trA.theta, core, trB.theta_inv)
    return edge_labelling(A, B, GradedMap(GB, GA, 0, mid.comps), trA, trB)


def random_horn2(rng, K, horn_index: int, lo: int = 0, amp: int = 1, maxdim: int = 2, **kw):
    """Two edge labellings forming the 2-horn missing face horn_index."""
    rng = make_rng(rng)
    model = TransferModel(rng, K, [0, 1, 2], lo=lo, amp=amp, maxdim=maxdim, **kw)
    out = []
    for j in (0, 1, 2):
        if j == horn_index:
            continue
        x, y = [v for v in (0, 1, 2) if v != j]
        out.append(random_edge_labelling(rng, model.F[x], model.F[y], model.label((x, y)), lo, amp))
    return out[0], out[1], model


def random_twisting_cochain(rng, K, cover, max_length: int | None = None, **kw):
    """A TwistingCochainData built by homotopy transfer."""
    from .descent import TwistingCochainData
    rng = make_rng(rng)
    model = TransferModel(rng, K, cover.system.vertices, **kw)
    # a shorter truncation would not be MC on cyclic tuples
    top = max(max_length or 0, model.E.hi - model.E.lo + 3)
    maps = model.labels(cover.system.all_tuples(top))
    return TwistingCochainData(cover, model.objects(), maps, top)


def random_twist_path(rng, K, cover, max_length: int | None = None, **kw):
    """A valid TwistPath: one transfer model over the vertices (a, j) of the prism."""
    from .descent import TwistingCochainData, TwistPath
    from .simplex_core import reduce_tuple
    rng = make_rng(rng)
    P = cover.system.product_with_interval()
    model = TransferModel(rng, K, P.vertices, **kw)
    top = max(max_length or 0, model.E.hi - model.E.lo + 3)
    ends = []
    for j in (0, 1):
        lab = {a: model.F[(a, j)] for a in cover.system.vertices}
        maps = {t: model.label(tuple((a, j) for a in t)) for t in cover.system.all_tuples(top) if len(t) >= 2}
        ends.append(TwistingCochainData(cover, lab, maps, top))
    maps = {}
    for t in P.all_tuples(top + 1):
        if len(t) >= 2 and len(reduce_tuple([x[0] for x in t])) <= top:
            maps[t] = model.label(t)
    return TwistPath(ends[0], ends[1], maps, top)


def random_gl_cocycle(rng, K, vertices, n: int = 2):
    """Transition matrices g_ab = M_b M_a^{-1}, so that g_bc g_ab = g_ac."""
    rng = make_rng(rng)
    M = {a: la.random_invertible(rng, n, K) for a in vertices}
    return {(a, b): M[b] * la.inverse(M[a]) for a in vertices for b in vertices if a != b}
