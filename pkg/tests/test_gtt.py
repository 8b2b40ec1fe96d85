import pytest
from hypothesis import given, settings, strategies as st

from helpers import QQ, field, rng, span
from twistkit import dg_nerve as dn
from twistkit import generators as gen
from twistkit import gtt
from twistkit import homalg as ha
from twistkit.errors import Refused
from twistkit.homalg import Complex, ElementaryDecl, GradedMap

seeds = st.integers(0, 10**6)


def _edge(seed, gf, lo=0, amp=1):
    K = field(gf)
    f = gen.random_quasi_iso(seed, K, lo=lo, amp=amp)
    return gen.random_edge_labelling(seed + 1, f.target, f.source, f, lo, amp)


def test_trivial_edge_is_valid():
    C = span(QQ, 1, 0)
    L = gtt.edge_labelling(C, C, ha.identity(C), gtt.trivial(C), gtt.trivial(C))
    assert gtt.is_gtt1(L)
    assert gtt.from_complex(C).p == 0


def test_lower_left_injection_is_flagged():
    # at the centre, phi_0k = (id, id) : C -> C + P maps C injectively into the
    # complement of vertex 0, so the lower-left block on the cells (0k, 012) is nonzero
    C, P = span(QQ, 1, 0), span(QQ, 1, 0)
    S = ha.direct_sum([C, P])
    I = ha.identity(C)
    inj = GradedMap(C, S, 0, ha.block_map([[I], [I]], [C], [C, P]).comps)
    verts = {(j,): dn.DgSimplex([C]) for j in range(3)}
    for e in [(0, 1), (0, 2), (1, 2)]:
        verts[e] = dn.DgSimplex([C, C], {(0, 1): I})
    verts[(0, 1, 2)] = dn.DgSimplex([S, C, C], {(0, 1): inj, (1, 2): I, (0, 2): inj,
                                                 (0, 1, 2): GradedMap(C, S, -1)})
    cells = {}
    for (t, s_) in gtt._cells(2):
        trs = []
        for j in t:
            if s_ == (0, 1, 2) and j == 0:
                trs.append(gtt.padding(C, P, ElementaryDecl(((1, 0),))))
            else:
                trs.append(gtt.trivial(C))
        cells[(t, s_)] = tuple(trs)
    L = gtt.GTTLabelling(2, verts, cells)
    rep = gtt.validate_gtt(L)
    assert rep.kinds() == {"ii"}
    bad = {tuple(e["cell"][:2]) for e in rep.errors}
    assert bad == {("01", "012"), ("02", "012")}
    assert all("lower-left" in e["message"] for e in rep.errors)


def test_broken_theta_is_flagged():
    L = _edge(3, False)
    (tr,) = L.cells[((0,), (0, 1))]
    bad = gtt.Trivialisation(tr.complement, tr.decl, tr.theta + tr.theta, tr.theta_inv)
    L.cells[((0,), (0, 1))] = (bad,)
    assert "i" in gtt.validate_gtt(L).kinds()


@settings(max_examples=60)
@given(seeds, st.booleans(), st.integers(0, 2))
def test_fill_horn2(seed, gf, h):
    a, b, _ = gen.random_horn2(seed, field(gf), h)
    assert gtt.is_valid(a) and gtt.is_valid(b)
    L = gtt.fill_horn2(a, b, h)
    rep = gtt.validate_gtt(L)
    assert rep.ok, rep.errors[:3]
    fa, fb = gtt.horn_faces(L, h)
    assert fa == a and fb == b


def test_horn_shape():
    a, b, _ = gen.random_horn2(1, QQ, 0)
    with pytest.raises(Exception):
        gtt.fill_horn2(a, b, 3)


def _iso_edges(seed, K):
    objs, edges = gen.random_iso_cocycle(seed, K, [0, 1, 2])
    E = {}
    for j in (0, 1, 2):
        x, y = [v for v in (0, 1, 2) if v != j]
        e = gen.random_edge_labelling(seed + j, objs[x], objs[y], edges[(x, y)], perturb=False)
        E[j] = gtt.connect_strictify(e)
    return E


@settings(max_examples=20)
@given(seeds, st.booleans(), st.integers(0, 2))
def test_green_filler(seed, gf, h):
    E = _iso_edges(seed, field(gf))
    js = [j for j in (0, 1, 2) if j != h]
    G = gtt.fill_horn2_green(E[js[0]], E[js[1]], h)
    assert gtt.is_gtt1(G)
    c = G.central()
    assert c.label((0, 1, 2)).is_zero()
    missing = tuple(v for v in (0, 1, 2) if v != h)
    assert ha.is_iso(c.label(missing))
    assert gtt.horn_faces(G, h) == (E[js[0]], E[js[1]])


def test_green_filler_refuses_quasi_isos():
    a, b, _ = gen.random_horn2(2, QQ, 1, isomorphic=False)
    if gtt.is_gtt1(a) and gtt.is_gtt1(b):
        pytest.skip("edges happen to be isomorphisms")
    with pytest.raises(Refused):
        gtt.fill_horn2_green(a, b, 1)


@settings(max_examples=50)
@given(seeds, st.booleans())
def test_strictify_postconditions(seed, gf):
    f = gen.random_quasi_iso(seed, field(gf), lo=-1, amp=2, maxdim=3)
    c = gtt.strictify(f).check()
    assert c["i_elementary"] and c["ii_padding"] and c["iii_isomorphism"] and c["iv_restriction"]


@settings(max_examples=30)
@given(seeds, st.booleans())
def test_connect_strictify_is_green(seed, gf):
    L = _edge(seed, gf)
    S = gtt.connect_strictify(L)
    assert gtt.is_gtt1(S)
    assert ha.is_iso(S.phi((0, 1), (0, 1)))
    assert gtt.gtt_face(S, 0) == gtt.gtt_face(L, 0) and gtt.gtt_face(S, 1) == gtt.gtt_face(L, 1)
    assert dn.is_valid(gtt.connect_compose(L))


def test_strictify_refuses_non_quasi_iso():
    C = Complex.concentrated(QQ, 1, 0)
    with pytest.raises(Refused):
        gtt.strictify(ha.zero_map(C, C))


def test_include_twist():
    s = gen.random_dg_simplex(5, QQ, 2)
    L = gtt.include_twist(s)
    assert gtt.is_valid(L) and L.central() == s
    C = Complex.concentrated(QQ, 1, 0)
    with pytest.raises(Refused):
        gtt.include_twist(dn.DgSimplex([C, C], {(0, 1): GradedMap(C, C, 0)}))


def _check_identities(L):
    p = L.p
    F, D = gtt.gtt_face, gtt.gtt_degeneracy
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            if p >= 2:
                assert F(F(L, j), i) == F(F(L, i), j - 1)
    for j in range(p + 1):
        S = D(L, j)
        assert gtt.is_valid(S)
        assert F(S, j) == L and F(S, j + 1) == L
        for i in range(j):
            if p >= 1:
                assert F(S, i) == D(F(L, i), j - 1)
        for i in range(j + 2, p + 2):
            assert F(S, i) == D(F(L, i - 1), j)
        for i in range(j + 1):
            assert D(S, i) == D(D(L, i), j + 1)


@settings(max_examples=15)
@given(seeds, st.booleans(), st.integers(0, 2))
def test_simplicial_identities_on_fills(seed, gf, h):
    a, b, _ = gen.random_horn2(seed, field(gf), h)
    _check_identities(gtt.fill_horn2(a, b, h))


@settings(max_examples=15)
@given(seeds, st.booleans())
def test_simplicial_identities_on_edges(seed, gf):
    _check_identities(_edge(seed, gf))


@settings(max_examples=10)
@given(seeds, st.booleans())
def test_simplicial_identities_on_tetrahedra(seed, gf):
    s = gen.random_dg_simplex(rng(seed), field(gf), 3)
    L = gtt.include_twist(s)
    assert gtt.is_valid(L)
    F = gtt.gtt_face
    for i in range(4):
        for j in range(i + 1, 4):
            assert F(F(L, j), i) == F(F(L, i), j - 1)
    for j in range(4):
        assert F(gtt.gtt_degeneracy(L, j), j) == L


def test_change_basis_keeps_validity():
    a, b, _ = gen.random_horn2(4, QQ, 1)
    L = gtt.fill_horn2(a, b, 1)
    C = L.C(0, (0, 1, 2))
    G, R, _ = gen.random_chain_iso(rng(1), C)
    M = gtt.change_basis(L, {(0, (0, 1, 2)): GradedMap(C, G, 0, R.comps)})
    assert gtt.is_valid(M)
