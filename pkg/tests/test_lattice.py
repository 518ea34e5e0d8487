import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import closed_subsets_oracle, group, members
from icphi.lattice import (
    all_subgroups,
    core,
    frattini,
    is_normal,
    is_simple,
    is_subnormal,
    maximal_chain,
    maximal_subgroups,
    minimal_normal_subgroups,
    n_maximal_subgroups,
    normal_closure,
    normal_subgroups,
    sylow_subgroup,
)
from icphi.perm import BudgetError, FiniteGroup, Permutation

KNOWN_COUNTS = {
    "C1": 1, "S3": 6, "Q8": 6, "D4": 10, "C2^3": 16, "A4": 10, "SL(2,3)": 15,
    "S4": 30, "A5": 59, "S5": 156, "C2^4": 67, "C12": 6, "Dic12": 8,
}

small = members(16)
mid = members(32)


@pytest.mark.parametrize("label,count", sorted(KNOWN_COUNTS.items()))
def test_known_subgroup_counts(label, count):
    assert len(group(label).lattice) == count


def test_c2_6_count():
    assert len(group("C2^6").lattice) == 2825


@pytest.mark.parametrize("label", ["(C2 x D4)", "(C3 : C4)#1", "Dic12", "(C2 x C4)", "Dic16"])
def test_matches_subset_oracle(label):
    G = group(label)
    if G.order > 16:
        pytest.skip("oracle is for order <= 16")
    got = {frozenset(H.indices.tolist()) for H in G.lattice.subgroups}
    assert got == closed_subsets_oracle(G)


def test_lattice_sorted_and_unique():
    L = group("S4").lattice
    assert L.orders.tolist() == sorted(L.orders.tolist())
    assert len(set(L.masks)) == len(L)
    assert L.orders[0] == 1 and L.orders[L.top] == 24


def test_budget():
    with pytest.raises(BudgetError):
        all_subgroups(group("C2^6"), budget=100)


def _relabel(G, seed):
    rng = np.random.default_rng(seed)
    sigma = Permutation(rng.permutation(G.degree).tolist())
    return FiniteGroup(G.degree, [sigma.inverse() * g * sigma for g in G.generators])


@given(st.sampled_from(mid), st.integers(0, 2**32 - 1))
def test_counts_by_order_relabel_invariant(m, seed):
    G = m.group
    H = _relabel(G, seed)
    assert sorted(G.lattice.orders.tolist()) == sorted(H.lattice.orders.tolist())


@given(st.sampled_from(mid))
def test_conjugation_permutes_subgroups(m):
    G = m.group
    L = G.lattice
    for g in G.generator_indices:
        images = {L.index(H.conjugate(g)) for H in L.subgroups}
        assert images == set(range(len(L)))


@given(st.sampled_from(mid), st.integers(1, 3))
def test_n_maximal_splicing(m, n):
    G = m.group
    level = {L_i.mask for L_i in n_maximal_subgroups(G, n)}
    nxt = {H.mask for H in n_maximal_subgroups(G, n + 1)}
    spliced = set()
    for M in n_maximal_subgroups(G, n):
        spliced |= {H.mask for H in maximal_subgroups(M)}
    assert nxt == spliced
    # every (n+1)-maximal subgroup is maximal in some n-maximal subgroup
    for h in nxt:
        assert any(h in {K.mask for K in maximal_subgroups(G.subgroup_from_mask(k))} for k in level)


def test_n_maximal_examples():
    G = group("SL(2,3)")
    assert sorted(H.order for H in n_maximal_subgroups(G, 1)) == [6, 6, 6, 6, 8]
    assert sorted(H.order for H in n_maximal_subgroups(G, 3)) == [1, 2]
    assert [H.order for H in n_maximal_subgroups(group("C6"), 2)] == [1]
    with pytest.raises(ValueError):
        n_maximal_subgroups(G, 0)


@given(st.sampled_from(mid))
def test_sylow_counting(m):
    G = m.group
    L = G.lattice
    for p in G.primes:
        P = sylow_subgroup(G, p)
        assert G.order % P.order == 0 and (G.order // P.order) % p
        n_p = len(L.of_order(P.order))
        assert n_p % p == 1 % p and G.order % n_p == 0
    assert sylow_subgroup(G, 101).order == 1


@given(st.sampled_from(mid))
def test_frattini_normal_and_nongenerators(m):
    G = m.group
    L = G.lattice
    Phi = frattini(G)
    assert is_normal(Phi, G)
    # oracle: Phi(G) is the set of non-generators
    nongen = []
    for x in range(G.order):
        cx = L.smallest_containing([x])
        if all(L.join(k, cx) != L.top or k == L.top for k in range(len(L))):
            nongen.append(x)
    assert set(nongen) == set(Phi.indices.tolist())


def test_frattini_examples():
    assert frattini(group("C1")).order == 1
    assert frattini(group("Q8")).order == 2
    assert frattini(group("C8")).order == 4
    assert frattini(group("S4")).order == 1
    assert frattini(group("C2^3")).order == 1
    assert frattini(group("SL(2,3)")).order == 2


@given(st.sampled_from(small))
def test_normal_subgroups_oracle(m):
    G = m.group
    for H in G.lattice.subgroups:
        oracle = all(G.conj_table[g, x] in H for g in range(G.order) for x in H.indices)
        assert is_normal(H, G) == oracle


@given(st.sampled_from(mid))
def test_core_closure_and_minimal_normal(m):
    G = m.group
    L = G.lattice
    normals = normal_subgroups(G)
    for H in L.subgroups[:: max(1, len(L) // 10)]:
        C = core(G, H)
        oracle = set(H.indices.tolist())
        for g in range(G.order):
            oracle &= set(G.conj_table[g, H.indices].tolist())
        assert set(C.indices.tolist()) == oracle
        N = normal_closure(G, H)
        assert H <= N and is_normal(N, G)
        assert all(N <= K for K in normals if H <= K)
    mins = minimal_normal_subgroups(G)
    assert all(not M.is_trivial() for M in mins)
    assert all(M == K or not (K < M) or K.is_trivial() for M in mins for K in normals)


@given(st.sampled_from(mid))
def test_subnormal_oracle(m):
    G = m.group
    L = G.lattice
    # oracle: subnormal iff reachable from G through a chain of normal-in-previous subgroups
    reach = {L.top}
    frontier = [L.top]
    while frontier:
        nxt = []
        for k in frontier:
            for i in L.normal_in(k):
                if i not in reach:
                    reach.add(i)
                    nxt.append(i)
        frontier = nxt
    for i, H in enumerate(L.subgroups):
        assert is_subnormal(G, H) == (i in reach)


def test_maximal_chain():
    G = group("S4")
    L = G.lattice
    for H in L.subgroups:
        ch = maximal_chain(G, H)
        assert ch.links[0] == L.index(H) and ch.links[-1] == L.top
        for a, b in zip(ch.links, ch.links[1:]):
            assert a in L.covers[b].tolist()
    sub = L.subgroups[L.of_order(6)[0]]
    other = [H for H in L.subgroups if H.order == 4 and not H <= sub][0]
    assert maximal_chain(sub, other) is None


def test_simplicity():
    assert is_simple(group("A5"))
    assert is_simple(group("C7"))
    assert not is_simple(group("S4"))
    assert not is_simple(group("C1"))
