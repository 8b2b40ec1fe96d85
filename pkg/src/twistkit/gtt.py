"""Labellings of the pair subdivision of Delta[p] by complexes and trivialisations.

A labelling assigns

* to every face sigma of Delta[p] a dg-simplex of dimension |sigma| - 1,
  whose local vertex k carries the complex C_{sigma[k]}(sigma);
* to every strict inclusion tau < sigma, and every vertex j of tau, an
  acyclic complement C_j^perp and an isomorphism of complexes
  theta : C_j(tau) + C_j^perp -> C_j(sigma), stored with its inverse.

The labelling is valid when the vertex labels are dg-simplices, every
theta is an invertible chain map onto an acyclic complement, and for every
K inside tau with |K| >= 2 the map phi_K(sigma), read through the thetas,
is block upper triangular with phi_K(tau) in the corner and the elementary
morphism between the complements on the diagonal.

Faces are tuples of vertices of Delta[p]; cells are pairs (tau, sigma).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from . import dg_nerve as dn
from . import homalg as ha
from . import linalg as la
from .dg_nerve import DgSimplex
from .errors import HornShapeError, IncompleteLabelling, InvalidIndex, NoInverse, Refused
from .homalg import Complex, ElementaryDecl, GradedMap


@dataclass
class Trivialisation:
    complement: Complex
    decl: ElementaryDecl | None
    theta: GradedMap
    theta_inv: GradedMap

    def __eq__(self, other):
        if not isinstance(other, Trivialisation):
            return NotImplemented
        return (self.complement == other.complement and self.decl == other.decl
                and self.theta == other.theta and self.theta_inv == other.theta_inv)


def trivial(C: Complex) -> Trivialisation:
    """Zero complement and identity theta."""
    Z = Complex.zero(C.K)
    S = ha.direct_sum([C, Z])
    idm = GradedMap(S, C, 0, ha.identity(C).comps)
    return Trivialisation(Z, ElementaryDecl(()), idm, GradedMap(C, S, 0, ha.identity(C).comps))


def padding(C: Complex, comp: Complex, decl: ElementaryDecl | None) -> Trivialisation:
    """Identity theta onto the literal direct sum C + comp."""
    S = ha.direct_sum([C, comp])
    return Trivialisation(comp, decl, ha.identity(S), ha.identity(S))


def _faces(p: int) -> list[tuple]:
    return [I for k in range(1, p + 2) for I in combinations(range(p + 1), k)]


def _cells(p: int) -> list[tuple]:
    out = []
    for s in _faces(p):
        for k in range(1, len(s)):
            for t in combinations(s, k):
                out.append((t, s))
    return out


@dataclass
class GTTLabelling:
    p: int
    vertices: dict = field(default_factory=dict)
    cells: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = {tuple(k): v for k, v in self.vertices.items()}
        self.cells = {(tuple(t), tuple(s)): tuple(v) for (t, s), v in self.cells.items()}

    @property
    def K(self):
        return self.C(0, (0,)).K

    def faces(self) -> list[tuple]:
        return _faces(self.p)

    def cell_keys(self) -> list[tuple]:
        return _cells(self.p)

    def C(self, j: int, sigma: Sequence[int]) -> Complex:
        sigma = tuple(sigma)
        return self.vertex(sigma).objects[sigma.index(j)]

    def vertex(self, sigma) -> DgSimplex:
        try:
            return self.vertices[tuple(sigma)]
        except KeyError:
            raise IncompleteLabelling(f"no label on the vertex {tuple(sigma)}") from None

    def phi(self, Kset: Sequence[int], sigma: Sequence[int]) -> GradedMap:
        sigma = tuple(sigma)
        return self.vertex(sigma).label(tuple(sigma.index(k) for k in Kset))

    def triv(self, tau, sigma, j) -> Trivialisation:
        tau, sigma = tuple(tau), tuple(sigma)
        try:
            return self.cells[(tau, sigma)][tau.index(j)]
        except KeyError:
            raise IncompleteLabelling(f"no label on the cell {(tau, sigma)}") from None

    def __eq__(self, other):
        if not isinstance(other, GTTLabelling) or self.p != other.p:
            return False
        if set(self.vertices) != set(other.vertices) or set(self.cells) != set(other.cells):
            return False
        if any(self.vertices[s] != other.vertices[s] for s in self.vertices):
            return False
        return all(a == b for k in self.cells for a, b in zip(self.cells[k], other.cells[k]))

    def central(self) -> DgSimplex:
        return self.vertex(tuple(range(self.p + 1)))


@dataclass
class GTTReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, kind, where, message, warning=False):
        rec = {"kind": kind, "cell": where, "message": message}
        (self.warnings if warning else self.errors).append(rec)

    def kinds(self) -> set:
        return {r["kind"] for r in self.errors}


def _fmt(x):
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], tuple):
        return ["".join(map(str, x[0])), "".join(map(str, x[1]))]
    return "".join(map(str, x))


def validate_gtt(L: GTTLabelling, strict: bool = False) -> GTTReport:
    rep = GTTReport()
    for s in L.faces():
        v = L.vertex(s)
        if v.dim != len(s) - 1:
            rep.add("shape", _fmt(s), f"vertex label has dimension {v.dim}")
            continue
        for fail in dn.validate_dg_simplex(v):
            rep.add("a", _fmt(s), f"dg-simplex relation fails on local face {fail.face}")
    if not rep.ok:
        return rep
    for (t, s) in L.cell_keys():
        if (t, s) not in L.cells:
            raise IncompleteLabelling(f"no label on the cell {(t, s)}")
        trs = L.cells[(t, s)]
        if len(trs) != len(t):
            rep.add("shape", _fmt((t, s)), "one trivialisation per vertex of tau is required")
            continue
        good = True
        for j, tr in zip(t, trs):
            where = _fmt((t, s)) + [str(j)]
            src = ha.direct_sum([L.C(j, t), tr.complement])
            tgt = L.C(j, s)
            if tr.theta.source != src or tr.theta.target != tgt or tr.theta.degree != 0:
                rep.add("i", where, "theta has the wrong source or target")
                good = False
                continue
            if tr.theta_inv.source != tgt or tr.theta_inv.target != src:
                rep.add("i", where, "theta inverse has the wrong source or target")
                good = False
                continue
            if not ha.is_elementary(tr.complement, strict):
                rep.add("i", where, "complement is not elementary")
                good = False
            if strict and tr.decl is not None and tr.complement != ha.build_elementary(tr.decl, tr.complement.K):
                rep.add("i", where, "complement does not match its declaration")
                good = False
            if not ha.is_chain_map(tr.theta):
                rep.add("i", where, "theta is not a chain map")
                good = False
            if (ha.compose(tr.theta, tr.theta_inv) != ha.identity(tgt)
                    or ha.compose(tr.theta_inv, tr.theta) != ha.identity(src)):
                rep.add("i", where, "theta and its inverse do not compose to the identity")
                good = False
        if not good:
            continue
        for k in range(2, len(t) + 1):
            for Kset in combinations(t, k):
                _check_block(L, t, s, Kset, rep)
    return rep


def _check_block(L, t, s, Kset, rep):
    k0, kl = Kset[0], Kset[-1]
    t0, tl = L.triv(t, s, k0), L.triv(t, s, kl)
    T = ha.compose_all(t0.theta_inv, L.phi(Kset, s), tl.theta)
    srcs = [L.C(kl, t), tl.complement]
    tgts = [L.C(k0, t), t0.complement]
    where = _fmt((t, s)) + ["K=" + "".join(map(str, Kset))]
    ul = ha.map_block(T, srcs, tgts, 0, 0)
    ll = ha.map_block(T, srcs, tgts, 1, 0)
    lr = ha.map_block(T, srcs, tgts, 1, 1)
    if not ll.is_zero():
        rep.add("ii", where, "lower-left block is nonzero")
    if ul != L.phi(Kset, t):
        rep.add("ii", where, "corner block differs from the label on tau")
    if len(Kset) >= 3:
        if not lr.is_zero():
            rep.add("ii", where, "complement block of a higher map is nonzero")
    elif tl.decl is not None and t0.decl is not None:
        E = ha.elementary_morphism(tl.complement, tl.decl, t0.complement, t0.decl, 0)
        if lr != E:
            rep.add("ii-elementary", where, "complement block is not the maximal elementary morphism",
                    warning=True)
        if not ha.is_chain_map(lr):
            rep.add("ii", where, "complement block is not a chain map")


def is_valid(L: GTTLabelling, strict: bool = False) -> bool:
    return validate_gtt(L, strict).ok


def is_gtt1(L: GTTLabelling) -> bool:
    for s in L.faces():
        v = L.vertex(s)
        if not dn.is_ordinary_core(v):
            return False
    return validate_gtt(L).ok


# ---------------------------------------------------------------------------
# simplicial structure

def _reindex_face(L: GTTLabelling, keep: Sequence[int]) -> GTTLabelling:
    """Restrict to the face spanned by ``keep`` and renumber it 0..len-1."""
    pos = {v: k for k, v in enumerate(keep)}
    ks = set(keep)
    verts = {tuple(pos[v] for v in s): L.vertices[s] for s in L.faces() if set(s) <= ks}
    cells = {(tuple(pos[v] for v in t), tuple(pos[v] for v in s)): L.cells[(t, s)]
             for (t, s) in L.cell_keys() if set(s) <= ks}
    return GTTLabelling(len(keep) - 1, verts, cells)


def gtt_face(L: GTTLabelling, i: int) -> GTTLabelling:
    if L.p == 0 or not 0 <= i <= L.p:
        raise InvalidIndex(f"face index {i} out of range")
    return _reindex_face(L, [v for v in range(L.p + 1) if v != i])


def restrict(L: GTTLabelling, face: Sequence[int]) -> GTTLabelling:
    return _reindex_face(L, list(face))


def gtt_pullback(L: GTTLabelling, m: Sequence[int]) -> GTTLabelling:
    """Pull back along a surjective monotone map [q] -> [p] given by its values."""
    m = tuple(m)
    if sorted(set(m)) != list(range(L.p + 1)) or any(b < a for a, b in zip(m, m[1:])):
        raise InvalidIndex(f"{m} is not a monotone surjection onto [{L.p}]")
    q = len(m) - 1
    img = lambda s: tuple(sorted(set(m[v] for v in s)))  # noqa: E731
    verts = {}
    for s in _faces(q):
        base = img(s)
        verts[s] = dn.pullback(L.vertex(base), [base.index(m[v]) for v in s])
    cells = {}
    for (t, s) in _cells(q):
        bt, bs = img(t), img(s)
        trs = []
        for j in t:
            Cj = verts[t].objects[t.index(j)]
            if bt == bs:
                trs.append(trivial(Cj))
            else:
                trs.append(L.triv(bt, bs, m[j]))
        cells[(t, s)] = tuple(trs)
    return GTTLabelling(q, verts, cells)


def gtt_degeneracy(L: GTTLabelling, i: int) -> GTTLabelling:
    if not 0 <= i <= L.p:
        raise InvalidIndex(f"degeneracy index {i} out of range")
    return gtt_pullback(L, [v for v in range(L.p + 1) for _ in range(2 if v == i else 1)])


# ---------------------------------------------------------------------------
# inclusions

def include_twist(s: DgSimplex, check: bool = True) -> GTTLabelling:
    """Label the central vertex by s and every other vertex by a face of s."""
    if check and not dn.in_core(s):
        raise Refused("simplex is not in the core: some edge is not a quasi-isomorphism")
    p = s.dim
    verts = {f: dn.pullback(s, f) for f in _faces(p)}
    cells = {(t, f): tuple(trivial(s.objects[j]) for j in t) for (t, f) in _cells(p)}
    return GTTLabelling(p, verts, cells)


def include_green(L: GTTLabelling) -> GTTLabelling:
    if not is_gtt1(L):
        raise Refused("not a strict labelling with isomorphism edges")
    return GTTLabelling(L.p, dict(L.vertices), dict(L.cells))


def from_complex(C: Complex) -> GTTLabelling:
    return GTTLabelling(0, {(0,): DgSimplex([C])}, {})


def edge_labelling(A: Complex, B: Complex, phi: GradedMap, trA: Trivialisation, trB: Trivialisation
                   ) -> GTTLabelling:
    """A labelling of Delta[1]: A at 0, B at 1, phi : B' -> A' in the middle."""
    verts = {(0,): DgSimplex([A]), (1,): DgSimplex([B]),
             (0, 1): DgSimplex([phi.target, phi.source], {(0, 1): phi})}
    cells = {((0,), (0, 1)): (trA,), ((1,), (0, 1)): (trB,)}
    return GTTLabelling(1, verts, cells)


# ---------------------------------------------------------------------------
# 2-horn filling

def _perm_map(parts: Sequence[Complex], order: Sequence[int]) -> GradedMap:
    """The isomorphism sum(parts[order[k]]) -> sum(parts) that puts summands back in place."""
    src = [parts[k] for k in order]
    blocks = [[None] * len(src) for _ in parts]
    for col, k in enumerate(order):
        blocks[k][col] = ha.identity(parts[k])
    return ha.block_map(blocks, src, list(parts))


def check_horn2(edge_a: GTTLabelling, edge_b: GTTLabelling, horn_index: int):
    """Raise HornShapeError unless the two edges form a 2-horn missing face horn_index.

    Returns the faces keyed by j, the vertices spanned by each face d_j and
    the complex at each vertex.
    """
    h = horn_index
    if h not in (0, 1, 2):
        raise HornShapeError("horn index must be 0, 1 or 2")
    if edge_a.p != 1 or edge_b.p != 1:
        raise HornShapeError("horn faces must be labellings of Delta[1]")
    js = [j for j in (0, 1, 2) if j != h]
    given = {js[0]: edge_a, js[1]: edge_b}
    # face d_j spans the vertices other than j
    span = {j: tuple(v for v in (0, 1, 2) if v != j) for j in js}
    glob = {}
    for j, E in given.items():
        for loc, v in enumerate(span[j]):
            C = E.C(loc, (loc,))
            if v in glob and glob[v] != C:
                raise HornShapeError(f"the two faces disagree at the shared vertex {v}")
            glob[v] = C
    return given, span, glob


def fill_horn2(edge_a: GTTLabelling, edge_b: GTTLabelling, horn_index: int, green: bool = False
               ) -> GTTLabelling:
    """Fill the 2-horn whose faces d_j (j != horn_index, increasing j) are the inputs.

    The complexes at the central vertex are padded by the complements of the
    opposite edge.  The missing edge and the 2-cell homotopy come from a
    homotopy inverse for the outer horns, or from composition with zero
    homotopy for the inner horn.  With ``green=True`` edges must be
    isomorphisms and the exact inverse is used, so the homotopy is zero.
    """
    h = horn_index
    given, span, glob = check_horn2(edge_a, edge_b, h)
    x, y = [v for v in (0, 1, 2) if v != h]
    # e joins h and x, e' joins h and y; e is the face missing y
    e, ep = given[y], given[x]
    e_verts, ep_verts = span[y], span[x]

    def tr_of(E, ev, v):
        loc = ev.index(v)
        return E.triv((loc,), (0, 1), loc)

    th_e, th_ep = tr_of(e, e_verts, h), tr_of(ep, ep_verts, h)
    tx_e, ty_ep = tr_of(e, e_verts, x), tr_of(ep, ep_verts, y)
    Ch, Cx, Cy = glob[h], glob[x], glob[y]
    Ph_e, Ph_ep = th_e.complement, th_ep.complement
    Px_e, Py_ep = tx_e.complement, ty_ep.complement
    slots = {h: [Ch, Ph_e, Ph_ep], x: [Cx, Px_e, Ph_ep], y: [Cy, Py_ep, Ph_e]}
    decls = {h: (th_e.decl, th_ep.decl), x: (tx_e.decl, th_ep.decl), y: (ty_ep.decl, th_e.decl)}
    C012 = {v: ha.direct_sum(slots[v]) for v in (0, 1, 2)}

    def padded_edge(E, extra):
        # theta_lo^-1 phi theta_hi + id : [C_hi, P_hi, extra] -> [C_lo, P_lo, extra]
        t_lo, t_hi = E.triv((0,), (0, 1), 0), E.triv((1,), (0, 1), 1)
        core = ha.compose_all(t_lo.theta_inv, E.phi((0, 1), (0, 1)), t_hi.theta)
        return ha.direct_sum_maps([core, ha.identity(extra)])

    # edge e between h and x: slots agree with [C_v, P_v^e, P_h^e'] on both ends
    Me = padded_edge(e, Ph_ep)
    Me = GradedMap(C012[e_verts[1]], C012[e_verts[0]], 0, Me.comps)
    # edge e' between h and y: the h end has its last two slots swapped
    Mep = padded_edge(ep, Ph_e)
    if ep_verts[0] == h:
        P = _perm_map(slots[h], [0, 2, 1])
        Mep = ha.compose(P, GradedMap(C012[y], P.source, 0, Mep.comps))
    else:
        Pinv = _perm_map([slots[h][0], slots[h][2], slots[h][1]], [0, 2, 1])
        Mep = ha.compose(GradedMap(Pinv.target, C012[y], 0, Mep.comps), Pinv)
    edges = {tuple(e_verts): Me, tuple(ep_verts): Mep}

    if h == 1:
        a, b = edges[(0, 1)], edges[(1, 2)]
        c = ha.compose(a, b)
        H = GradedMap(C012[2], C012[0], -1)
    elif h == 0:
        a, c = edges[(0, 1)], edges[(0, 2)]
        if green:
            g = _exact_inverse(a)
            b, H = ha.compose(g, c), GradedMap(C012[2], C012[0], -1)
        else:
            g, _, hA = ha.whitehead_inverse(a)
            b = ha.compose(g, c)
            H = ha.scale(ha.compose(hA, c), -1)
    else:
        b, c = edges[(1, 2)], edges[(0, 2)]
        if green:
            g = _exact_inverse(b)
            a, H = ha.compose(c, g), GradedMap(C012[2], C012[0], -1)
        else:
            g, hB, _ = ha.whitehead_inverse(b)
            a = ha.compose(c, g)
            H = ha.scale(ha.compose(c, hB), -1)
    centre = DgSimplex([C012[0], C012[1], C012[2]], {(0, 1): a, (0, 2): c, (1, 2): b, (0, 1, 2): H})

    verts, cells = {}, {}
    for v in (0, 1, 2):
        verts[(v,)] = DgSimplex([glob[v]])
    for j, E in given.items():
        ev = span[j]
        verts[ev] = E.vertices[(0, 1)]
        cells[((ev[0],), ev)] = E.cells[((0,), (0, 1))]
        cells[((ev[1],), ev)] = E.cells[((1,), (0, 1))]
    xy = (x, y)
    new_edge = a if xy == (0, 1) else (b if xy == (1, 2) else c)
    verts[xy] = DgSimplex([C012[x], C012[y]], {(0, 1): new_edge})
    verts[(0, 1, 2)] = centre

    def extra_triv(v):
        comp = ha.direct_sum(slots[v][1:])
        d1, d2 = decls[v]
        decl = d1 + d2 if d1 is not None and d2 is not None else None
        return padding(slots[v][0], comp, decl)

    for v in (x, y):
        cells[((v,), xy)] = (extra_triv(v),)
    cells[(xy, (0, 1, 2))] = tuple(trivial(C012[v]) for v in xy)
    for v in (0, 1, 2):
        cells[((v,), (0, 1, 2))] = (extra_triv(v),)
    # edges of the horn sit inside the centre with the mirrored slot as complement
    for E, ev, extra_is_e in ((e, e_verts, False), (ep, ep_verts, True)):
        trs = []
        for loc, v in enumerate(ev):
            tr = E.triv((loc,), (0, 1), loc)
            extra = Ph_e if extra_is_e else Ph_ep
            fwd = ha.direct_sum_maps([tr.theta_inv, ha.identity(extra)])
            bwd = ha.direct_sum_maps([tr.theta, ha.identity(extra)])
            src = ha.direct_sum([E.C(loc, (0, 1)), extra])
            if extra_is_e and v == h:
                P = _perm_map(slots[h], [0, 2, 1])
                theta = ha.compose(P, GradedMap(src, P.source, 0, fwd.comps))
                theta_inv = GradedMap(P.source, src, 0, bwd.comps)
                theta_inv = ha.compose(theta_inv, ha.inverse_map(P))
            else:
                theta = GradedMap(src, C012[v], 0, fwd.comps)
                theta_inv = GradedMap(C012[v], src, 0, bwd.comps)
            trs.append(Trivialisation(extra, th_e.decl if extra_is_e else th_ep.decl, theta, theta_inv))
        cells[(ev, (0, 1, 2))] = tuple(trs)
    return GTTLabelling(2, verts, cells)


def _exact_inverse(f: GradedMap) -> GradedMap:
    if not ha.is_iso(f):
        raise Refused("edge is not an isomorphism")
    return ha.inverse_map(f)


def fill_horn2_green(edge_a: GTTLabelling, edge_b: GTTLabelling, horn_index: int) -> GTTLabelling:
    for E in (edge_a, edge_b):
        if not is_gtt1(E):
            raise Refused("horn faces must be strict labellings with isomorphism edges")
    return fill_horn2(edge_a, edge_b, horn_index, green=True)


def horn_faces(L: GTTLabelling, horn_index: int) -> tuple[GTTLabelling, GTTLabelling]:
    js = [j for j in range(3) if j != horn_index]
    return gtt_face(L, js[0]), gtt_face(L, js[1])


# ---------------------------------------------------------------------------
# strictification and paths

def strictify(f: GradedMap) -> ha.Strictification:
    """Pad both sides of a quasi-isomorphism by elementary complexes until it is an isomorphism.

    The result restricts to f on B after projecting to A; when f is injective
    the restriction lands in A exactly.
    """
    try:
        return ha.strictify_map(f)
    except NoInverse as exc:
        raise Refused(str(exc)) from exc


def _middle(path: GTTLabelling):
    if path.p != 1:
        raise Refused("a path is a labelling of Delta[1]")
    t0 = path.triv((0,), (0, 1), 0)
    t1 = path.triv((1,), (0, 1), 1)
    phi = path.phi((0, 1), (0, 1))
    return t0, t1, phi


def connect_compose(path: GTTLabelling) -> DgSimplex:
    """Collapse a path A -> (A' ~ B') <- B to one quasi-isomorphism B -> A."""
    t0, t1, phi = _middle(path)
    A, B = path.C(0, (0,)), path.C(1, (1,))
    pA = ha.projection([A, t0.complement], 0)
    iB = ha.inclusion([B, t1.complement], 0)
    f = ha.compose_all(pA, t0.theta_inv, phi, t1.theta, iB)
    f = GradedMap(B, A, 0, f.comps)
    if not ha.is_quasi_iso(f):
        raise Refused("composite is not a quasi-isomorphism")
    return DgSimplex([A, B], {(0, 1): f})


def connect_strictify(path: GTTLabelling) -> GTTLabelling:
    """Replace the middle quasi-isomorphism of a path by an isomorphism.

    The middle complexes are padded by elementary complexes from the
    strictification; the complements grow accordingly.
    """
    t0, t1, phi = _middle(path)
    A, B = path.C(0, (0,)), path.C(1, (1,))
    core = ha.compose_all(t0.theta_inv, phi, t1.theta)
    st = strictify(core)
    EA, EB = st.E_A, st.E_B
    A1, B1 = path.C(0, (0, 1)), path.C(1, (0, 1))
    At, Bt = ha.direct_sum([A1, EA]), ha.direct_sum([B1, EB])
    to_At = ha.direct_sum_maps([t0.theta, ha.identity(EA)])
    from_At = ha.direct_sum_maps([t0.theta_inv, ha.identity(EA)])
    to_Bt = ha.direct_sum_maps([t1.theta, ha.identity(EB)])
    from_Bt = ha.direct_sum_maps([t1.theta_inv, ha.identity(EB)])
    # st.f_tilde : (B + B^perp) + E_B -> (A + A^perp) + E_A
    ft = ha.compose_all(GradedMap(st.A_tilde, to_At.source, 0, ha.identity(st.A_tilde).comps),
                        st.f_tilde,
                        GradedMap(from_Bt.target, st.B_tilde, 0, ha.identity(st.B_tilde).comps))
    f_iso = ha.compose_all(to_At, ft, from_Bt)
    f_iso = GradedMap(Bt, At, 0, f_iso.comps)

    def grown(tr, base, E, decl_E, to_, from_):
        comp = ha.direct_sum([tr.complement, E])
        decl = tr.decl + decl_E if tr.decl is not None else None
        S = ha.direct_sum([base, comp])
        theta = GradedMap(S, to_.target, 0, to_.comps)
        theta_inv = GradedMap(from_.source, S, 0, from_.comps)
        return Trivialisation(comp, decl, theta, theta_inv)

    trA = grown(t0, A, EA, st.decl_A, to_At, from_At)
    trB = grown(t1, B, EB, st.decl_B, to_Bt, from_Bt)
    trA = Trivialisation(trA.complement, trA.decl, GradedMap(trA.theta.source, At, 0, trA.theta.comps),
                         GradedMap(At, trA.theta.source, 0, trA.theta_inv.comps))
    trB = Trivialisation(trB.complement, trB.decl, GradedMap(trB.theta.source, Bt, 0, trB.theta.comps),
                         GradedMap(Bt, trB.theta.source, 0, trB.theta_inv.comps))
    return edge_labelling(A, B, f_iso, trA, trB)


# ---------------------------------------------------------------------------
# helpers for building and perturbing labellings

def change_basis(L: GTTLabelling, R: Mapping) -> GTTLabelling:
    """Transport L along chain isomorphisms R[(j, sigma)] : C_j(sigma) -> G.

    Missing keys mean the identity.  The result is valid exactly when L is.
    """
    def r(j, s):
        return R.get((j, s))

    verts = {}
    for s in L.faces():
        v = L.vertex(s)
        objs = [r(j, s).target if r(j, s) is not None else v.objects[k] for k, j in enumerate(s)]
        maps = {}
        for I, f in v.maps.items():
            a, b = r(s[I[0]], s), r(s[I[-1]], s)
            g = f
            if b is not None:
                g = ha.compose(g, ha.inverse_map(b))
            if a is not None:
                g = ha.compose(a, g)
            maps[I] = GradedMap(objs[I[-1]], objs[I[0]], f.degree, g.comps)
        verts[s] = DgSimplex(objs, maps)
    cells = {}
    for (t, s), trs in L.cells.items():
        new = []
        for j, tr in zip(t, trs):
            a, b = r(j, s), r(j, t)
            th, thi = tr.theta, tr.theta_inv
            Ct = verts[t].objects[t.index(j)]
            Cs = verts[s].objects[s.index(j)]
            S = ha.direct_sum([Ct, tr.complement])
            if b is not None:
                pre = ha.direct_sum_maps([ha.inverse_map(b), ha.identity(tr.complement)])
                th = ha.compose(th, GradedMap(S, pre.target, 0, pre.comps))
                post = ha.direct_sum_maps([b, ha.identity(tr.complement)])
                thi = GradedMap(thi.source, S, 0, ha.compose(post, thi).comps)
            if a is not None:
                th = ha.compose(a, th)
                thi = ha.compose(thi, ha.inverse_map(a))
            new.append(Trivialisation(tr.complement, tr.decl,
                                      GradedMap(S, Cs, 0, th.comps), GradedMap(Cs, S, 0, thi.comps)))
        cells[(t, s)] = tuple(new)
    return GTTLabelling(L.p, verts, cells)
