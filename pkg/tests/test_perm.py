import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus, group
from icphi.perm import (
    BudgetError,
    FiniteGroup,
    Permutation,
    SubgroupRef,
    center,
    centralizer,
    commutator_subgroup,
    compose,
    is_prime,
    normalizer,
    omega,
    p_part,
    prime_factors,
)


def perms(degree):
    return st.permutations(range(degree)).map(Permutation)


@st.composite
def perm_pairs(draw, k=2, max_degree=7):
    n = draw(st.integers(1, max_degree))
    return [draw(perms(n)) for _ in range(k)]


def test_compose_applies_left_first():
    a = Permutation.from_cycles(3, (0, 1))
    b = Permutation.from_cycles(3, (1, 2))
    ab = compose(a, b)
    assert ab.images == (2, 0, 1)
    assert ab.cycles() == [(0, 2, 1)]
    assert ab == Permutation.from_cycles(3, (0, 2, 1))
    assert a * b != b * a


@given(perm_pairs(3))
def test_compose_associative(ps):
    a, b, c = ps
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(perm_pairs(1))
def test_inverse_and_identity(ps):
    (a,) = ps
    e = Permutation.identity(a.degree)
    assert compose(a, a.inverse()) == e == compose(a.inverse(), a)
    assert compose(a, e) == a


@given(perm_pairs(1))
def test_order_is_cycle_lcm(ps):
    (a,) = ps
    k = a.order()
    x = a
    for _ in range(k - 1):
        assert not x.is_identity()
        x = x * a
    assert x.is_identity()


def test_not_a_bijection_rejected():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        compose(Permutation([0, 1]), Permutation([0, 1, 2]))


@given(perm_pairs(2, max_degree=5))  # S6 is past the order budget
def test_cayley_table_matches_compose(ps):
    G = FiniteGroup(ps[0].degree, ps)
    els = G.elements
    assert els[0].is_identity()
    assert list(els) == sorted(els)
    n = G.order
    rows = np.random.default_rng(n).integers(0, n, size=(min(n * n, 200), 2))
    for i, j in rows:
        assert els[G.table[i, j]] == els[i] * els[j]
    assert all(els[G.inv[i]] == els[i].inverse() for i in range(n))


def test_closure_orders():
    assert FiniteGroup(5, [Permutation.from_cycles(5, (0, 1, 2, 3, 4)), Permutation.from_cycles(5, (0, 1))]).order == 120
    assert FiniteGroup(3, []).order == 1


def test_order_budget():
    gens = [Permutation.from_cycles(6, tuple(range(6))), Permutation.from_cycles(6, (0, 1))]
    with pytest.raises(BudgetError):
        FiniteGroup(6, gens)


def test_lagrange_assertion():
    G = group("S3")
    with pytest.raises(AssertionError):
        SubgroupRef(G, 0b1111)  # 4 does not divide 6
    with pytest.raises(ValueError):
        SubgroupRef(G, 0b110)


def test_number_theory_helpers():
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(1) == []
    assert p_part(48, 2) == 16
    assert omega(48) == 5
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def _commutator_oracle(G, H, K):
    """``[H, K]`` by closing the commutator set under composition of permutations."""
    comms = {(h.inverse() * k.inverse() * h * k) for h in H.elements for k in K.elements}
    span = set(comms) | {Permutation.identity(G.degree)}
    frontier = list(span)
    while frontier:
        nxt = []
        for x in frontier:
            for c in comms:
                y = x * c
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    return span


@pytest.mark.parametrize("label", ["S3", "Q8", "D4", "A4", "SL(2,3)", "(C3 : C4)#1", "S4"])
def test_commutator_subgroup_oracle(label):
    G = group(label)
    L = G.lattice
    for H in L.subgroups[:: max(1, len(L) // 12)]:
        got = commutator_subgroup(H, G.whole)
        assert set(got.elements) == _commutator_oracle(G, H, G.whole)


@pytest.mark.parametrize("label", ["D4", "A4", "SL(2,3)", "S4", "(C2 x D4)"])
def test_commutator_invariants(label):
    G = group(label)
    L = G.lattice
    brs = {h: commutator_subgroup(L.subgroups[h], G.whole) for h in range(len(L))}
    for h, B in brs.items():
        assert L.normal_flags[L.index(B)], "[H, G] is normal"
        for k in np.flatnonzero(L.contains[:, h]).tolist():
            assert B <= brs[k], "[H, G] grows with H"
        for g in G.generator_indices:
            Hg = L.subgroups[h].conjugate(g)
            assert B.conjugate(g) == brs[L.index(Hg)]


def test_centralizer_center_normalizer():
    assert center(group("Q8")).order == 2
    assert center(group("D4")).order == 2
    assert center(group("S3")).order == 1
    assert center(group("C2^3")).order == 8
    S4 = group("S4")
    L = S4.lattice
    V = [H for H in L.of_order(4) if L.normal_flags[H]][0]
    assert normalizer(S4, L.subgroups[V]).order == 24
    assert centralizer(S4, L.subgroups[V]).order == 4
    P = L.subgroups[L.of_order(3)[0]]
    assert normalizer(S4, P).order == 6
    assert centralizer(S4, P).order == 3


def test_groups_are_relabel_invariant_in_order():
    for m in corpus(12):
        G = m.group
        sigma = Permutation(list(reversed(range(G.degree))))
        gens = [sigma.inverse() * g * sigma for g in G.generators]
        assert FiniteGroup(G.degree, gens).order == G.order


def test_subgroup_masks():
    G = group("D4")
    H = G.subgroup([G.generator_indices[0]])
    assert H.order == 4
    assert all(x in H for x in H.indices)
    assert H <= G.whole and not G.whole <= H
    assert (H & G.trivial).is_trivial()
    pairs = list(itertools.product(H.indices, repeat=2))
    assert all(G.table[a, b] in H for a, b in pairs)
