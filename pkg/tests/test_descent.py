import pytest
from hypothesis import given, settings, strategies as st

from helpers import QQ, cover, field, rng
from twistkit import descent as de
from twistkit import generators as gen
from twistkit import gtt
from twistkit import homalg as ha
from twistkit import linalg as la
from twistkit.errors import NotInvertible, Refused

seeds = st.integers(0, 10**6)

COVERS = [cover(2), cover(3), cover(3, [["a", "b"], ["b", "c"]])]


def _locfree(seed, K, n=3):
    cv = cover(n)
    objs, edges = gen.random_iso_cocycle(seed, K, cv.indices, lo=0, amp=1, maxdim=2)
    return de.LocFreeData(cv, objs, edges)


@settings(max_examples=30)
@given(seeds, st.booleans())
def test_locfree_accepts_conjugated_cocycle(seed, gf):
    d = _locfree(seed, field(gf))
    assert de.validate_locfree(d).ok
    tc = de.embed_locfree(d)
    assert de.validate_twisting_cochain(tc).ok


@settings(max_examples=30)
@given(seeds, st.booleans(), st.sampled_from([("a", "b"), ("b", "c"), ("c", "a")]))
def test_locfree_perturbation_pinpoints_triangles(seed, gf, e):
    d = _locfree(seed, field(gf))
    if d.labelling[e[0]].is_zero():
        return
    d.edges[e] = ha.scale(d.edges[e], 2)
    rep = de.validate_locfree(d)
    expect = {t for t in d.cover.system.tuples(3)
              if e in ((t[0], t[2]), (t[0], t[1]), (t[1], t[2]))}
    assert rep.kinds() == {"cocycle"}
    assert rep.tuples() == {tuple(map(str, t)) for t in expect}


def test_locfree_rejects_singular_edge():
    d = _locfree(1, QQ, 2)
    d.edges[("a", "b")] = ha.zero_map(d.labelling["b"], d.labelling["a"])
    if d.labelling["a"].is_zero():
        pytest.skip("empty complexes")
    assert "invertible" in de.validate_locfree(d).kinds()


@settings(max_examples=10)
@given(seeds, st.booleans(), st.sampled_from(range(3)))
def test_twisting_cochain_and_stc(seed, gf, c):
    tc = gen.random_twisting_cochain(seed, field(gf), COVERS[c], max_length=3)
    assert de.validate_twisting_cochain(tc).ok
    stc = de.stc_from_twisting_cochain(tc, 3)
    assert de.validate_stc(stc).ok


def test_stc_threads_agree():
    tc = gen.random_twisting_cochain(2, QQ, cover(3), max_length=3)
    stc = de.stc_from_twisting_cochain(tc, 3)
    assert de.validate_stc(stc, workers=4).records == de.validate_stc(stc).records == []


def test_stc_broken_theta_is_flagged():
    tc = gen.random_twisting_cochain(5, QQ, cover(2), max_length=3)
    stc = de.stc_from_twisting_cochain(tc, 3)
    t = ("a", "b")
    L = stc.labellings[t]
    key = ((0,), (0, 1))
    (tr,) = L.cells[key]
    L.cells[key] = (gtt.Trivialisation(tr.complement, tr.decl, ha.scale(tr.theta, 0), tr.theta_inv),)
    rep = de.validate_stc(stc)
    assert "gtt-i" in rep.kinds()
    assert ("a", "b") in rep.tuples("gtt-i")


def test_dropped_component_gives_one_record():
    tc = gen.random_twisting_cochain(3, QQ, cover(3), max_length=3)
    t = next(t for t in tc.maps if len(t) == 3)
    del tc.maps[t]
    rep = de.validate_twisting_cochain(tc)
    assert [(r["kind"], tuple(r["tuple"])) for r in rep.records] == [("incomplete", t)]


def test_twisting_cochain_rejects_wrong_degenerate_value():
    tc = gen.random_twisting_cochain(3, QQ, cover(2), max_length=3)
    A = tc.labelling["a"]
    tc.maps[("a", "a")] = ha.scale(ha.identity(A), 2)
    if A.is_zero():
        return
    assert de.validate_twisting_cochain(tc).kinds() == {"degeneracy"}


@settings(max_examples=12)
@given(seeds, st.booleans(), st.sampled_from(range(3)))
def test_path_to_weq(seed, gf, c):
    p = gen.random_twist_path(seed, field(gf), COVERS[c], max_length=3)
    assert de.validate_path(p).ok
    w = de.path_to_weq(p)
    assert de.validate_weq(w).ok


def test_constant_path_gives_identity():
    tc = gen.random_twisting_cochain(4, QQ, cover(3), max_length=3)
    w = de.path_to_weq(de.constant_path(tc))
    assert w == de.identity_weq(tc)
    assert de.validate_weq(w).ok


def test_weq_sign_flip_is_flagged():
    for seed in range(20):
        p = gen.random_twist_path(seed, QQ, cover(3), max_length=3)
        w = de.path_to_weq(p)
        T = next((t for t, f in w.components.items()
                  if len(t) == 3 and not ha.hom_differential(f).is_zero()), None)
        if T is None:
            continue
        w.components[T] = -w.components[T]
        rep = de.validate_weq(w)
        assert {"tuple": list(T), "bidegree": [2, -1]} in [
            {"tuple": r["tuple"], "bidegree": r["bidegree"]} for r in rep.records]
        return
    pytest.fail("no seed produced a live length-3 component")


def test_opposite_sign_on_the_composite_face_fails():
    # with +Lambda_ac in the length-3 relation the identity fails on some tuple
    bad = 0
    for seed in range(6):
        p = gen.random_twist_path(seed, QQ, cover(3), max_length=3)
        w = de.path_to_weq(p)
        for T in w.cover.system.tuples(3):
            r = de.weq_residual(w, T)
            flipped = r + ha.scale(w.get((T[0], T[2])), 2)
            assert r.is_zero()
            bad += not flipped.is_zero()
    assert bad > 0


def test_path_refused_with_report():
    p = gen.random_twist_path(1, QQ, cover(2), max_length=3)
    t = next(t for t in p.maps if len(t) == 2 and t[0][1] == 0 and t[1][1] == 1)
    p.maps[t] = ha.scale(p.maps[t], 0)
    with pytest.raises(Refused) as e:
        de.path_to_weq(p)
    assert not e.value.report.ok


@pytest.mark.parametrize("lam", range(13))
def test_sign_identity(lam):
    assert all(de.sign_identity(lam, j) for j in range(lam + 1))


@settings(max_examples=30)
@given(seeds, st.booleans(), st.integers(1, 3), st.integers(1, 4))
def test_principal_cocycles_and_gauge(seed, gf, n, size):
    K = field(gf)
    r = rng(seed)
    cv = cover(n)
    g = gen.random_gl_cocycle(r, K, cv.indices, size)
    assert de.validate_principal_cocycle(cv, g).ok
    ident = {k: la.eye(size, K) for k in g}
    assert de.validate_principal_cocycle(cv, ident).ok
    lam = {a: la.random_invertible(r, size, K) for a in cv.indices}
    h = {(a, b): lam[b] * M * la.inverse(lam[a]) for (a, b), M in g.items()}
    assert de.validate_gauge(cv, lam, g, h).ok
    assert de.validate_principal_cocycle(cv, h).ok
    if n >= 2:
        g2 = dict(g)
        g2[("a", "b")] = g2[("a", "b")] * la.from_rows([[2 if i == j == 0 else int(i == j)
                                                         for j in range(size)] for i in range(size)], K)
        assert not de.validate_gauge(cv, lam, g2, h).ok


def test_rank_deficient_rejected():
    cv = cover(2)
    g = {("a", "b"): la.from_rows([[1, 2], [2, 4]], QQ), ("b", "a"): la.eye(2, QQ)}
    with pytest.raises(NotInvertible):
        de.validate_principal_cocycle(cv, g)
    with pytest.raises(NotInvertible):
        de.validate_gauge(cv, {"a": la.eye(2, QQ), "b": g[("a", "b")]}, {}, {})


def test_export_notation():
    tc = gen.random_twisting_cochain(1, QQ, cover(2), max_length=3)
    out = de.export_stc_notation(de.stc_from_twisting_cochain(tc, 3))
    assert set(out) == {t for t in cover(2).system.all_tuples(3) if len(t) >= 2}
    assert all(v["mc"] for per in out.values() for v in per.values())

