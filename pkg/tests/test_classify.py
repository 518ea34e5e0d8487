import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus, group, members
from icphi import classify as C
from icphi.lattice import is_normal, maximal_subgroups, normal_subgroups, sylow_subgroup
from icphi.perm import BudgetError, FiniteGroup, Permutation, is_prime, is_prime_power, p_part
from icphi.series import quotient

mid = members(32)
upto48 = members(48)
upto24 = members(24)


def _relabelled(G, seed):
    rng = np.random.default_rng(seed)
    sigma = Permutation(rng.permutation(G.degree).tolist())
    return FiniteGroup(G.degree, [sigma.inverse() * g * sigma for g in G.generators])


@given(st.sampled_from(upto48))
def test_class_implications(m):
    G = m.group
    if C.is_cyclic(G):
        assert C.is_abelian(G)
    if C.is_abelian(G):
        assert C.is_nilpotent(G)
    if C.is_nilpotent(G):
        assert C.is_supersolvable(G)
        assert all(C.is_p_nilpotent(G, p) for p in G.primes)
    if C.is_supersolvable(G):
        assert C.is_solvable(G)


@given(st.sampled_from(upto48))
def test_supersolvable_iff_maximal_subgroups_have_prime_index(m):
    G = m.group
    oracle = all(is_prime(G.order // M.order) for M in maximal_subgroups(G))
    assert C.is_supersolvable(G) == oracle


@given(st.sampled_from(upto48))
def test_p_nilpotent_iff_normal_complement(m):
    G = m.group
    L = G.lattice
    for p in G.primes:
        k = G.order // p_part(G.order, p)
        oracle = any(L.normal_flags[i] for i in L.of_order(k))
        assert C.is_p_nilpotent(G, p) == oracle


@given(st.sampled_from(upto48))
def test_solvable_iff_derived_series_ends(m):
    G = m.group
    L = G.lattice
    cur = L.top
    while True:
        nxt = L.derived_of(cur)
        if nxt == cur:
            break
        cur = nxt
    assert C.is_solvable(G) == (cur == 0)


def test_named_classifications():
    assert not C.is_solvable(group("A5"))
    assert C.is_solvable(group("S4")) and not C.is_supersolvable(group("S4"))
    assert C.is_supersolvable(group("S3")) and not C.is_nilpotent(group("S3"))
    assert not C.is_p_nilpotent(group("SL(2,3)"), 2)
    assert C.is_p_nilpotent(group("SL(2,3)"), 3)
    assert C.is_2_closed(group("SL(2,3)")) and not C.is_2_closed(group("S4"))
    assert C.is_minimal_non_nilpotent(group("A4"))
    assert C.is_minimal_non_nilpotent(group("S3"))
    assert not C.is_minimal_non_nilpotent(group("S4"))
    assert C.is_elementary_abelian(group("C2^3")) and not C.is_elementary_abelian(group("C4"))
    assert C.is_p_group(group("Q8")) and C.is_p_group(group("C1")) and not C.is_p_group(group("C6"))
    with pytest.raises(ValueError):
        C.is_p_nilpotent(group("S3"), 4)


def test_quaternion_recognition():
    assert C.is_q8(group("Q8"))
    assert not C.is_q8(group("D4")) and not C.is_q8(group("C8")) and not C.is_q8(group("C2^3"))
    assert C.is_generalized_quaternion(group("Dic16"))
    assert not C.is_generalized_quaternion(group("Dic12"))
    assert not C.is_generalized_quaternion(group("D8"))
    assert not C.is_q8_free(group("SL(2,3)"))
    assert not C.is_q8_free(group("(C2 x Q8)"))
    assert C.is_q8_free(group("S4")) and C.is_q8_free(group("D8"))


def _is_q8_quotient(G, H, N):
    """Explicit quotient test: nonabelian of order 8 with a single involution."""
    Q = quotient(H, N).group
    if Q.order != 8:
        return False
    orders = Q.element_orders
    return int((orders == 2).sum()) == 1 and int((orders == 4).sum()) == 6


@pytest.mark.parametrize("m", [m for m in mid if m.group.order % 8 == 0], ids=lambda m: m.name)
def test_q8_free_matches_full_section_search(m):
    G = m.group
    L = G.lattice
    found = False
    for H in L.subgroups:
        if H.order % 8 or found:
            continue
        for N in normal_subgroups(H):
            if H.order == 8 * N.order and _is_q8_quotient(G, H, N):
                found = True
                break
    assert C.is_q8_free(G) == (not found)


@given(st.sampled_from(mid), st.integers(0, 2**32 - 1))
def test_isomorphic_to_relabelled_copy(m, seed):
    G = m.group
    H = _relabelled(G, seed)
    assert C.fingerprint(G) == C.fingerprint(H)
    iso = C.isomorphism(G, H)
    assert iso is not None
    # iso is a bijective homomorphism
    assert sorted(iso.tolist()) == list(range(G.order))
    assert (iso[G.table] == H.table[iso[:, None], iso[None, :]]).all()


def test_nonisomorphic_pairs():
    assert not C.isomorphic(group("Q8"), group("D4"))
    assert not C.isomorphic(group("C4"), group("C2^2"))
    assert not C.isomorphic(group("SL(2,3)"), group("S4"))
    assert not C.isomorphic(group("C3"), group("C4"))
    assert C.isomorphic(group("S3"), group("D3"))
    assert C.isomorphic(group("(C2 x C3)"), group("C6"))
    assert C.isomorphic(group("(C2^2 : C3)#1"), group("A4"))


def test_isomorphism_is_an_equivalence_on_corpus():
    ms = members(16)
    for a in ms:
        assert C.isomorphic(a.group, a.group)
    for a in ms:
        for b in ms:
            if a is not b:
                assert C.isomorphic(a.group, b.group) == C.isomorphic(b.group, a.group) == False  # noqa: E712


def test_isomorphism_budget_is_never_a_guess():
    G = group("C2^5")
    H = _relabelled(G, 7)
    with pytest.raises(BudgetError):
        C.isomorphic(G, H, node_budget=3)


@pytest.mark.parametrize("n", range(1, 21))
def test_cyclic_automorphism_count(n):
    phi = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    assert len(C.automorphisms(group(f"C{n}"))) == phi


@pytest.mark.parametrize("label,count", [("C2^2", 6), ("C2^3", 168), ("S3", 6), ("D4", 8), ("Q8", 24),
                                         ("S4", 24), ("A4", 24), ("C3^2", 48)])
def test_automorphism_counts(label, count):
    auts = C.automorphisms(group(label))
    assert len(auts) == count
    G = group(label)
    for a in auts[:10]:
        a = np.array(a)
        assert (a[G.table] == G.table[a[:, None], a[None, :]]).all()


def test_automorphism_group_of_q8_is_s4():
    A = C.automorphism_group(group("Q8"))
    assert A.order == 24
    assert C.isomorphic(A, group("S4"))
    with pytest.raises(BudgetError):
        C.automorphism_group(group("C64"))


def test_fingerprint_fields():
    fp = C.fingerprint(group("SL(2,3)"))
    assert fp.order == 24
    assert dict(fp.element_orders) == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
    assert fp.center_order == 2 and fp.derived_order == 8
    assert fp.abelianization == (3,)
    assert sum(c for _, c in fp.subgroup_counts) == 15
    assert C.abelian_invariants({1: 1, 2: 3, 4: 4}) == (2, 4)


@given(st.sampled_from(upto48))
def test_burnside_and_prime_power_index(m):
    G = m.group
    p = G.primes[0] if G.primes else None
    if p is not None and C.is_cyclic(sylow_subgroup(G, p)):
        assert C.is_p_nilpotent(G, p)
    if C.is_solvable(G):
        assert all(is_prime_power(G.order // M.order) for M in maximal_subgroups(G))


@given(st.sampled_from(upto48))
def test_unique_subgroup_of_order_p(m):
    G = m.group
    if not C.is_p_group(G) or G.order == 1:
        return
    p = G.primes[0]
    if len(G.lattice.of_order(p)) == 1:
        assert C.is_cyclic(G) or C.is_generalized_quaternion(G)


def test_normal_sylow_closedness_against_lattice(corpus24):
    for m in corpus24:
        G = m.group
        if 2 in G.primes:
            assert C.is_2_closed(G) == is_normal(sylow_subgroup(G, 2), G)
