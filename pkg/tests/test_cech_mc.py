import pytest
from hypothesis import given, settings, strategies as st

from helpers import QQ, cover, field, random_element, random_map, rng, small_complex
from twistkit import cech_mc as cm
from twistkit import generators as gen
from twistkit import homalg as ha
from twistkit.errors import ConversionRefused, ShapeError
from twistkit.simplex_core import TupleSystem

seeds = st.integers(0, 10**6)

NERVES = {1: [[0]], 2: [[0, 1]], 3: [[0, 1, 2]], 4: [[0, 1], [1, 2], [2, 3]]}


def _cover(n, full=True):
    idx = [chr(97 + k) for k in range(n)]
    if full:
        return cm.Cover(idx, [idx])
    return cm.Cover(idx, [[idx[a] for a in s] for s in NERVES[n]])


def _element(seed, gf, n):
    r = rng(seed)
    K = field(gf)
    S = _cover(n).system
    lab = {v: small_complex(r, K, lo=-1, amp=1, maxdim=2) for v in S.vertices}
    return r, S, lab, random_element(r, S, lab, 3, density=0.3)


@settings(max_examples=200)
@given(seeds, st.booleans(), st.integers(1, 3))
def test_deleted_cech_squares_to_zero(seed, gf, n):
    _, _, _, f = _element(seed, gf, n)
    assert cm.deleted_cech_diff(cm.deleted_cech_diff(f)).is_zero()


@settings(max_examples=200)
@given(seeds, st.booleans(), st.integers(1, 3))
def test_total_differential_squares_to_zero(seed, gf, n):
    _, _, _, f = _element(seed, gf, n)
    assert cm.total_diff(cm.total_diff(f)).is_zero()
    assert cm.internal_diff(cm.internal_diff(f)).is_zero()


def _homogeneous(r, S, lab, p, q):
    comps = {}
    for t in S.all_tuples(4, nondegenerate=False):
        if len(t) - 1 == p and r.random() < 0.6:
            comps[(t, q)] = random_map(r, lab[t[-1]], lab[t[0]], q)
    return cm.BigradedElement(S, lab, comps)


@settings(max_examples=100)
@given(seeds, st.booleans(), st.integers(0, 2), st.integers(-1, 1), st.integers(0, 2), st.integers(-1, 1))
def test_total_differential_is_a_derivation(seed, gf, p1, q1, p2, q2):
    r, S, lab, _ = _element(seed, gf, 3)
    f = _homogeneous(r, S, lab, p1, q1)
    g = _homogeneous(r, S, lab, p2, q2)
    D = cm.total_diff
    lhs = D(cm.cup(f, g))
    rhs = cm.cup(D(f), g) + cm.cup(f, D(g)).scaled((-1) ** (p1 + q1))
    assert lhs == rhs


def test_cup_is_associative():
    r, S, lab, f = _element(11, False, 3)
    g = random_element(r, S, lab, 2, density=0.3)
    h = random_element(r, S, lab, 2, density=0.3)
    assert cm.cup(cm.cup(f, g), h) == cm.cup(f, cm.cup(g, h))


def _mc(seed, gf, n, full=True, amp=1, maxdim=2):
    r = rng(seed)
    K = field(gf)
    S = _cover(n, full).system
    objs, maps, _ = gen.random_mc_data(r, K, S, lo=0, amp=amp, maxdim=maxdim)
    return cm.make_mc(S, objs, maps)


@settings(max_examples=100)
@given(seeds, st.booleans(), st.integers(1, 4), st.booleans(), st.integers(0, 2), st.integers(1, 3))
def test_mc_round_trip(seed, gf, n, full, amp, maxdim):
    if n == 4 and full:
        full, amp = False, min(amp, 1)
    f = _mc(seed, gf, n, full, amp, maxdim)
    assert cm.is_mc(f) == []
    fam = cm.mc_to_labelling(f)
    back = cm.labelling_to_mc(f.system, fam)
    assert back == f


@settings(max_examples=40)
@given(seeds, st.booleans(), st.integers(2, 3))
def test_curvature_in_algebra(seed, gf, n):
    # Df + f.f, with the forced degenerate values, vanishes on nondegenerate tuples
    f = _mc(seed, gf, n)
    top = cm.amplitude_bound(f.labelling) + 2
    curv = cm.mc_curvature(f, top)
    live = [(t, q) for (t, q), F in curv.comps.items()
            if len(t) <= top and TupleSystem.nondegenerate(t) and not F.is_zero()]
    assert live == []


@settings(max_examples=50)
@given(seeds, st.booleans(), st.integers(2, 3))
def test_bidegree_two_zero_relation(seed, gf, n):
    # d f_xyz = f_xz - f_xy f_yz, composing on the right first
    f = _mc(seed, gf, n)
    for t in f.system.tuples(3):
        x, y, z = t
        lhs = ha.hom_differential(cm.forced(f, t))
        rhs = cm.forced(f, (x, z)) - ha.compose(cm.forced(f, (x, y)), cm.forced(f, (y, z)))
        assert lhs == rhs


@settings(max_examples=50)
@given(seeds, st.booleans())
def test_perturbation_is_reported(seed, gf):
    f = _mc(seed, gf, 3)
    r = rng(seed + 1)
    t = ("a", "b")
    F = f.get(t, 0)
    g = gen.random_graded_map(r, F.source, F.target, 0)
    if g.is_zero():
        return
    bad = f.like({**f.comps, (t, 0): F + g})
    recs = cm.is_mc(bad)
    assert recs
    assert all(rec.bidegree == (len(rec.tuple) - 1, 3 - len(rec.tuple)) for rec in recs)
    assert all(t[0] in rec.tuple or t[1] in rec.tuple for rec in recs)
    with pytest.raises(ConversionRefused):
        cm.mc_to_labelling(bad)


def test_shape_errors():
    f = _mc(1, False, 2)
    with pytest.raises(ShapeError):
        cm.is_mc(f.like({**f.comps, (("a", "b"), 1): ha.GradedMap.differential(f.labelling["a"])}))


def test_single_vertex_cover():
    f = _mc(2, False, 1)
    assert f.comps == {} and cm.is_mc(f) == []


def test_split_components():
    idx = ["a", "b", "c", "d"]
    S = cm.Cover(idx, [["a", "b"], ["c", "d"]]).system
    objs, maps, _ = gen.random_mc_data(rng(3), QQ, S)
    f = cm.make_mc(S, objs, maps)
    parts = cm.split_components(f)
    assert len(parts) == 2
    assert sum(len(p.comps) for p in parts) == len(f.comps)


def test_cover_helper():
    assert cover(2).system.valid(("a", "b", "a"))
