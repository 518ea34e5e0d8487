from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import group, members
from icphi import classify as C
from icphi.lattice import is_normal, normal_subgroups
from icphi.perm import FiniteGroup, Permutation, center
from icphi.series import (
    chief_series,
    components,
    fitting,
    generalized_fitting,
    hypercenter,
    o_p,
    o_p_prime,
    quotient,
    u_hypercenter,
    upper_central_series,
)

mid = members(32)
upto24 = members(24)


@given(st.sampled_from(upto24), st.data())
def test_quotient_is_homomorphism(m, data):
    G = m.group
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    Q = quotient(G, N)
    assert Q.group.order * N.order == G.order
    T, P = G.table, Q.projection
    assert (P[T] == Q.group.table[P[:, None], P[None, :]]).all()
    for H in G.lattice.subgroups[:: max(1, len(G.lattice) // 6)]:
        img = Q.image(H)
        pre = Q.preimage(img)
        assert H <= pre and N <= pre
        assert pre.order == img.order * N.order


def test_quotient_rejects_non_normal():
    G = group("S3")
    H = G.lattice.subgroups[G.lattice.of_order(2)[0]]
    with pytest.raises(ValueError):
        quotient(G, H)


def test_quotient_examples():
    G = group("SL(2,3)")
    Q = quotient(G, center(G))
    assert C.isomorphic(Q.group, group("A4"))
    D4 = group("D4")
    assert C.is_elementary_abelian(quotient(D4, center(D4)).group)


@given(st.sampled_from(mid), st.integers(0, 2**32 - 1))
def test_chief_factor_multiset_relabel_invariant(m, seed):
    G = m.group
    rng = np.random.default_rng(seed)
    sigma = Permutation(rng.permutation(G.degree).tolist())
    H = FiniteGroup(G.degree, [sigma.inverse() * g * sigma for g in G.generators])
    assert Counter(chief_series(G).factor_orders) == Counter(chief_series(H).factor_orders)


@given(st.sampled_from(mid))
def test_chief_series_steps_are_chief(m):
    G = m.group
    L = G.lattice
    cs = chief_series(G)
    assert cs.terms[0].is_trivial() and cs.terms[-1] == G.whole
    normals = [L.index(N) for N in normal_subgroups(G)]
    for lo, hi in zip(cs.terms, cs.terms[1:]):
        assert is_normal(lo, G) and is_normal(hi, G) and lo < hi
        a, b = L.index(lo), L.index(hi)
        assert not any(k not in (a, b) and L.contains[b, k] and L.contains[k, a] for k in normals)


def test_chief_factors_of_s4_and_sl23():
    assert chief_series(group("S4")).factor_orders == (4, 3, 2)
    assert chief_series(group("SL(2,3)")).factor_orders == (2, 4, 3)
    cs = chief_series(group("A4"))
    assert [Q.group.order for Q in cs.factors] == [4, 3]


@given(st.sampled_from(upto24))
def test_upper_central_series_via_quotients(m):
    G = m.group
    terms = upper_central_series(G)
    assert terms[0].is_trivial()
    for lo, hi in zip(terms, terms[1:]):
        Q = quotient(G, lo)
        assert Q.preimage(center(Q.group)) == hi
    Q = quotient(G, terms[-1])
    assert center(Q.group).is_trivial()


@given(st.sampled_from(mid))
def test_hypercenter_matches_nilpotence(m):
    G = m.group
    assert (hypercenter(G) == G.whole) == C.is_nilpotent(G)


@given(st.sampled_from(mid))
def test_fitting_contains_nilpotent_normals(m):
    G = m.group
    F = fitting(G)
    Fs = generalized_fitting(G)
    assert F <= Fs and is_normal(Fs, G)
    assert C.is_nilpotent(F)
    for N in normal_subgroups(G):
        if C.is_nilpotent(N):
            assert N <= F
    for p in G.primes:
        assert o_p(G, p) <= F
        assert o_p_prime(G, p).order % p


def test_radical_examples():
    assert fitting(group("SL(2,3)")).order == 8
    assert fitting(group("S4")).order == 4
    assert fitting(group("A5")).order == 1
    assert generalized_fitting(group("A5")).order == 60
    assert generalized_fitting(group("S5")).order == 60
    assert [K.order for K in components(group("S5"))] == [60]
    assert components(group("S4")) == []
    assert o_p_prime(group("S4"), 2).order == 1
    assert o_p_prime(group("S3"), 2).order == 3
    assert o_p(group("S4"), 3).order == 1


@given(st.sampled_from(mid))
def test_u_hypercenter_matches_supersolvability(m):
    G = m.group
    Z = u_hypercenter(G)
    assert is_normal(Z, G)
    assert (Z == G.whole) == C.is_supersolvable(G)
    assert hypercenter(G) <= Z


def test_u_hypercenter_examples():
    assert u_hypercenter(group("S3")).order == 6
    assert u_hypercenter(group("S4")).order == 1
    assert u_hypercenter(group("A4")).order == 1
    assert u_hypercenter(group("SL(2,3)")).order == 2
    assert u_hypercenter(group("C1")).order == 1
