"""Small builders shared by the test modules."""

import random

from twistkit import cech_mc as cm
from twistkit import generators as gen
from twistkit import homalg as ha
from twistkit import linalg as la
from twistkit.homalg import Complex, GradedMap

QQ = la.field_from_spec("QQ")
GF5 = la.field_from_spec({"prime": 5})


def field(flag):
    return GF5 if flag else QQ


def mat(K, rows):
    return la.from_rows(rows, K)


def span(K, n=1, at=0):
    return ha.span(K, n, at)


def small_complex(rng, K, lo=-1, amp=2, maxdim=2):
    return gen.random_complex(rng, K, lo, amp, maxdim)


def random_map(rng, C, D, degree):
    return gen.random_graded_map(rng, C, D, degree)


def random_element(rng, system, labelling, max_length, degrees=(-2, -1, 0, 1), density=0.5):
    """A general element of the bigraded algebra, degenerate tuples included."""
    comps = {}
    for t in system.all_tuples(max_length, nondegenerate=False):
        for q in degrees:
            if rng.random() < density:
                comps[(t, q)] = gen.random_graded_map(rng, labelling[t[-1]], labelling[t[0]], q)
    return cm.BigradedElement(system, labelling, comps)


def cover(n, nerve=None):
    idx = [chr(ord("a") + k) for k in range(n)]
    return cm.Cover(idx, nerve if nerve is not None else [idx])


def rng(seed):
    return random.Random(seed)


def complex_from(K, dims, diffs=None):
    return Complex(K, dims, {n: mat(K, M) for n, M in (diffs or {}).items()})


def zero(C, D, k=0):
    return GradedMap(C, D, k)
