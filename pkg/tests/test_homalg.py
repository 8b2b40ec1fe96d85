import pytest
from hypothesis import given, settings, strategies as st

from helpers import GF5, QQ, complex_from, field, mat, random_map, rng, small_complex, span
from twistkit import generators as gen
from twistkit import homalg as ha
from twistkit import linalg as la
from twistkit.errors import MalformedMap, NotSplittable, UnsupportedShape
from twistkit.homalg import Complex, ElementaryDecl, GradedMap

seeds = st.integers(0, 10**6)


def test_complex_rejects_bad_differential():
    with pytest.raises(MalformedMap):
        complex_from(QQ, {0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})
    with pytest.raises(MalformedMap):
        complex_from(QQ, {0: 2, 1: 1}, {0: [[1]]})


def test_hom_differential_sign_convention():
    # on the span M -> M, id has zero differential and the contraction gives -id
    E = span(QQ, 1, 0)
    h = ha.elementary_contraction(ElementaryDecl(((1, 0),)), QQ)
    assert ha.hom_differential(ha.identity(E)).is_zero()
    assert ha.hom_differential(h) == -ha.identity(E)
    # a degree -1 map: (df)^m = f^{m+1} d + d f^m
    C = complex_from(QQ, {0: 1, 1: 1}, {0: [[2]]})
    f = GradedMap(C, C, -1, {1: mat(QQ, [[3]])})
    df = ha.hom_differential(f)
    assert la.to_rows(df.at(0)) == [[6]] and la.to_rows(df.at(1)) == [[6]]


@settings(max_examples=500)
@given(seeds, st.booleans(), st.integers(-2, 2))
def test_d_squared(seed, gf, k):
    r = rng(seed)
    K = field(gf)
    A, B = small_complex(r, K), small_complex(r, K)
    f = random_map(r, A, B, k)
    assert ha.hom_differential(ha.hom_differential(f)).is_zero()


@settings(max_examples=500)
@given(seeds, st.booleans(), st.integers(-2, 2), st.integers(-2, 2))
def test_leibniz(seed, gf, a, b):
    # d(g f) = g df + (-1)^{|f|} dg f
    r = rng(seed)
    K = field(gf)
    A, B, C = (small_complex(r, K, maxdim=2) for _ in range(3))
    f = random_map(r, A, B, a)
    g = random_map(r, B, C, b)
    lhs = ha.hom_differential(ha.compose(g, f))
    rhs = ha.compose(g, ha.hom_differential(f)) + ha.scale(ha.compose(ha.hom_differential(g), f), (-1) ** a)
    assert lhs == rhs


def test_homology_of_known_complex():
    C = complex_from(QQ, {0: 2, 1: 2, 2: 1}, {0: [[1, 0], [0, 0]], 1: [[0, 1]]})
    assert ha.betti(C) == {0: 1}
    D = complex_from(GF5, {0: 1, 1: 1}, {0: [[5]]})
    assert ha.betti(D) == {0: 1, 1: 1}


@settings(max_examples=100)
@given(seeds, st.booleans())
def test_split_acyclic_and_contraction(seed, gf):
    r = rng(seed)
    K = field(gf)
    C = gen.random_complex(r, K, -1, 2, 3, acyclic=True)
    decl, psi = ha.split_acyclic(C)
    assert ha.is_chain_map(psi) and ha.is_iso(psi)
    assert ha.build_elementary(decl, K).dims == {n: C.dim(n) for n in C.degrees if C.dim(n)} or C.is_zero()
    h = ha.contraction(C)
    assert ha.hom_differential(h) == -ha.identity(C)


def test_split_acyclic_refuses():
    with pytest.raises(NotSplittable):
        ha.split_acyclic(Complex.concentrated(QQ, 1, 0))


@settings(max_examples=100)
@given(seeds, st.booleans(), st.integers(1, 3))
def test_summand_homotopy(seed, gf, m):
    r = rng(seed)
    K = field(gf)
    C = small_complex(r, K)
    E = span(K, m, 0)
    i, p, h = ha.summand_homotopy(C, E)
    total = i.target
    assert ha.hom_differential(h) == ha.compose(i, p) - ha.identity(total)
    # h is (0, -id_M) from degree 1 to degree 0
    cdim = C.dim(1), C.dim(0)
    expect = la.block([[la.zeros(cdim[1], cdim[0], K), la.zeros(cdim[1], m, K)],
                       [la.zeros(m, cdim[0], K), -la.eye(m, K)]])
    assert la.equal(h.at(1), expect)
    assert all(h.at(n).shape[0] * h.at(n).shape[1] == 0 or la.is_zero(h.at(n)) for n in total.degrees if n != 1)


def test_summand_homotopy_shape():
    with pytest.raises(UnsupportedShape):
        ha.summand_homotopy(span(QQ, 1, 0), span(QQ, 1, 1))


def test_elementary_recognition():
    assert ha.is_elementary(span(QQ, 2, -1), strict=True)
    assert ha.is_elementary(Complex.zero(QQ))
    assert not ha.is_elementary(Complex.concentrated(QQ, 1, 0))
    C = complex_from(QQ, {0: 1, 1: 1}, {0: [[3]]})
    assert ha.is_elementary(C) and not ha.is_elementary(C, strict=True)


@settings(max_examples=60)
@given(seeds, st.booleans())
def test_strictify_random(seed, gf):
    K = field(gf)
    f = gen.random_quasi_iso(seed, K, lo=-1, amp=2, maxdim=3)
    s = ha.strictify_map(f)
    c = s.check()
    for key in ("i_elementary", "ii_padding", "iii_isomorphism", "iv_restriction"):
        assert c[key], key


def test_strictify_inclusion_pads_target_by_epsilon():
    r = rng(3)
    C = small_complex(r, QQ, 0, 1, 2)
    eps = span(QQ, 1, 0)
    inc = ha.inclusion([C, eps], 0)
    s = ha.strictify_map(inc)
    assert s.decl_B == ElementaryDecl(((1, 0),)) and len(s.decl_A) == 0
    assert all(s.check().values())


def test_strictify_identity_and_zero():
    C = small_complex(rng(1), QQ)
    s = ha.strictify_map(ha.identity(C))
    assert len(s.decl_A) == 0 and len(s.decl_B) == 0
    z = ha.zero_map(span(QQ, 1, 0), Complex.zero(QQ))
    s = ha.strictify_map(z)
    c = s.check()
    assert c["iii_isomorphism"] and c["iv_restriction"]


@settings(max_examples=60)
@given(seeds, st.booleans())
def test_whitehead_inverse(seed, gf):
    K = field(gf)
    f = gen.random_quasi_iso(seed, K, lo=0, amp=2, maxdim=2)
    g, hB, hA = ha.whitehead_inverse(f)
    assert ha.is_chain_map(g)
    assert ha.hom_differential(hB) == ha.compose(g, f) - ha.identity(f.source)
    assert ha.hom_differential(hA) == ha.compose(f, g) - ha.identity(f.target)


def test_mapping_cone_acyclic_iff_quasi_iso():
    f = gen.random_quasi_iso(5, QQ)
    assert ha.is_acyclic(ha.mapping_cone(f))
    C = Complex.concentrated(QQ, 1, 0)
    assert not ha.is_acyclic(ha.mapping_cone(ha.zero_map(C, C)))
