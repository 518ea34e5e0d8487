"""Quotients, chief series, central series and characteristic subgroups.

All functions take an ambient group ``X``: a ``FiniteGroup`` or a
``SubgroupRef`` (treated as a group in its own right, computed inside the
parent's lattice).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .lattice import SubgroupLattice, _lat
from .perm import FiniteGroup, Permutation, SubgroupRef, is_prime, mask_to_bool, p_part, prime_factors


@dataclass(frozen=True)
class QuotientGroup:
    """``source / kernel`` realised by the right action on the cosets of ``kernel``."""

    source: FiniteGroup
    kernel: SubgroupRef
    group: FiniteGroup
    projection: np.ndarray  # source element index -> quotient element index

    def image(self, H: SubgroupRef) -> SubgroupRef:
        """``HN/N`` as a subgroup of the quotient."""
        return SubgroupRef(self.group, self.group.mask_of(self.projection[H.indices]))

    def preimage(self, K: SubgroupRef) -> SubgroupRef:
        flags = mask_to_bool(K.mask, self.group.order)[self.projection]
        return SubgroupRef(self.source, self.source.mask_of(np.flatnonzero(flags)))


def _standalone(X: FiniteGroup | SubgroupRef, N: SubgroupRef) -> tuple[FiniteGroup, SubgroupRef]:
    if isinstance(X, FiniteGroup):
        return X, N
    G = X.parent
    S = X.as_group()
    Nm = S.mask_of(S.index(G.elements[i]) for i in N.indices)
    return S, SubgroupRef(S, Nm)


def quotient(X: FiniteGroup | SubgroupRef, N: SubgroupRef) -> QuotientGroup:
    G, N = _standalone(X, N)
    L = G.lattice
    if not L.normal_flags[L.index(N)]:
        raise ValueError("kernel is not normal")
    n = G.order
    nidx = N.indices
    # label each element by the smallest index in its right coset N x
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if label[x] < 0:
            label[G.table[nidx, x]] = len(reps)
            reps.append(x)
    reps_arr = np.array(reps)

    def coset_perm(g: int) -> Permutation:
        return Permutation(label[G.table[reps_arr, g]].tolist())

    Q = FiniteGroup(len(reps), [coset_perm(g) for g in G.generator_indices],
                    name=f"{G.name or 'G'}/N")
    # element x acts on cosets as the permutation of N y -> N y x
    proj = np.array([Q.index(label[G.table[reps_arr, x]].tolist()) for x in range(n)], dtype=np.int64)
    for a in G.generator_indices:
        for b in G.generator_indices:
            assert proj[G.table[a, b]] == Q.table[proj[a], proj[b]], "projection is not a homomorphism"
    assert Q.order * N.order == n
    assert set(np.flatnonzero(proj == 0).tolist()) == set(nidx.tolist()), "kernel mismatch"
    return QuotientGroup(G, N, Q, proj)


@dataclass(frozen=True)
class ChiefSeries:
    """``1 = N_0 < N_1 < ... < N_k = X`` with each step a chief factor of ``X``."""

    ambient: SubgroupRef
    terms: tuple[SubgroupRef, ...]

    @cached_property
    def factors(self) -> list[QuotientGroup]:
        out = []
        for lo, hi in zip(self.terms, self.terms[1:]):
            out.append(quotient(hi, lo))
        return out

    @property
    def factor_orders(self) -> tuple[int, ...]:
        return tuple(hi.order // lo.order for lo, hi in zip(self.terms, self.terms[1:]))


def _chief_chain(L: SubgroupLattice, x: int, start: int = 0, through: int | None = None) -> list[int]:
    """A chief series of ``x`` from ``start`` up, optionally refining through ``through``."""
    normals = L.normal_in(x)
    chain = [start]
    targets = [through, x] if through is not None else [x]
    for target in targets:
        while chain[-1] != target:
            cur = chain[-1]
            above = [i for i in normals if i != cur and L.contains[i, cur] and L.contains[target, i]]
            # minimal among those strictly above the current term
            nxt = next(i for i in above if not any(j != i and L.contains[i, j] for j in above))
            chain.append(nxt)
    return chain


def chief_series(X) -> ChiefSeries:
    L, x = _lat(X)
    terms = _chief_chain(L, x) if x != 0 else [0]
    return ChiefSeries(L.subgroups[x], tuple(L.subgroups[i] for i in terms))


def upper_central_series(X) -> list[SubgroupRef]:
    L, x = _lat(X)
    G = L.group
    A = L.subgroups[x]
    gens = list(A.generators)
    aidx = A.indices
    terms = [0]
    while True:
        inside = mask_to_bool(L.masks[terms[-1]], G.order)
        if gens:
            ok = inside[G.comm_table[np.ix_(aidx, gens)]].all(axis=1)
        else:
            ok = np.ones(len(aidx), dtype=bool)
        nxt = L.index(G.mask_of(aidx[ok]))
        if nxt == terms[-1]:
            return [L.subgroups[i] for i in terms]
        terms.append(nxt)


def hypercenter(X) -> SubgroupRef:
    return upper_central_series(X)[-1]


def o_p(X, p: int) -> SubgroupRef:
    """Largest normal ``p``-subgroup: the intersection of the Sylow ``p``-subgroups."""
    L, x = _lat(X)
    target = p_part(int(L.orders[x]), p)
    m = L.masks[x]
    for i in L.of_order(target, within=x):
        m &= L.masks[i]
    return L.subgroups[L.index(m)]


def _fitting_index(L: SubgroupLattice, x: int) -> int:
    key = ("F", x)
    if key not in L._cache:
        cur = 0
        for p in _primes(L, x):
            cur = L.join(cur, L.index(o_p(L.subgroups[x], p)))
        L._cache[key] = cur
    return L._cache[key]


def _primes(L: SubgroupLattice, x: int) -> list[int]:
    return prime_factors(int(L.orders[x]))


def _is_nilpotent_index(L: SubgroupLattice, x: int) -> bool:
    """Every Sylow subgroup of ``x`` is normal, i.e. unique."""
    key = ("nil", x)
    if key not in L._cache:
        n = int(L.orders[x])
        L._cache[key] = all(len(L.of_order(p_part(n, p), within=x)) == 1 for p in prime_factors(n))
    return L._cache[key]


def fitting(X) -> SubgroupRef:
    """Largest nilpotent normal subgroup, as the join of the ``O_p``."""
    L, x = _lat(X)
    f = _fitting_index(L, x)
    assert L.is_normal_in(f, x) and _is_nilpotent_index(L, f)
    return L.subgroups[f]


def _is_solvable_index(L: SubgroupLattice, x: int) -> bool:
    key = ("solv", x)
    if key not in L._cache:
        cur = x
        while cur != 0:
            nxt = L.derived_of(cur)
            if nxt == cur:
                break
            cur = nxt
        L._cache[key] = cur == 0
    return L._cache[key]


def _is_simple_index(L: SubgroupLattice, x: int) -> bool:
    return x != 0 and len(L.normal_in(x)) == 2


def _center_index(L: SubgroupLattice, x: int) -> int:
    key = ("Z", x)
    if key not in L._cache:
        G = L.group
        A = L.subgroups[x]
        gens = list(A.generators)
        aidx = A.indices
        ok = (G.comm_table[np.ix_(aidx, gens)] == 0).all(axis=1) if gens else np.ones(len(aidx), dtype=bool)
        L._cache[key] = L.index(G.mask_of(aidx[ok]))
    return L._cache[key]


def _is_subnormal_index(L: SubgroupLattice, h: int, x: int) -> bool:
    idx = L.subgroups[h].indices
    k = x
    while True:
        nxt = L.normal_closure_in(idx, k)
        if nxt == k:
            return k == h
        k = nxt


def _components_indices(L: SubgroupLattice, x: int) -> list[int]:
    key = ("comp", x)
    if key not in L._cache:
        out = []
        if not _is_solvable_index(L, x):
            for h in L.subs(x).tolist():
                if h == 0 or L.derived_of(h) != h:
                    continue
                z = _center_index(L, h)
                # H/Z(H) simple: no normal subgroup of H strictly between Z(H) and H
                between = [k for k in L.normal_in(h) if k not in (z, h) and L.contains[k, z]]
                if between or z == h:
                    continue
                if _is_subnormal_index(L, h, x):
                    out.append(h)
        L._cache[key] = out
    return L._cache[key]


def components(X) -> list[SubgroupRef]:
    """Subnormal quasisimple subgroups."""
    L, x = _lat(X)
    return [L.subgroups[i] for i in _components_indices(L, x)]


def _gen_fitting_index(L: SubgroupLattice, x: int) -> int:
    key = ("F*", x)
    if key not in L._cache:
        cur = _fitting_index(L, x)
        for c in _components_indices(L, x):
            cur = L.join(cur, c)
        L._cache[key] = cur
    return L._cache[key]


def generalized_fitting(X) -> SubgroupRef:
    """``F*(X)``: generated by ``F(X)`` and the components of ``X``."""
    L, x = _lat(X)
    f = _gen_fitting_index(L, x)
    assert L.is_normal_in(f, x)
    return L.subgroups[f]


def _prime_step_reachable(L: SubgroupLattice, x: int, start: int) -> set[int]:
    """Normal subgroups of ``x`` reachable from ``start`` by steps of prime index."""
    normals = [i for i in L.normal_in(x) if L.contains[i, start]]
    reach = {start}
    for i in normals:  # ascending order, so predecessors come first
        if i == start:
            continue
        for j in list(reach):
            if L.contains[i, j] and is_prime(int(L.orders[i] // L.orders[j])):
                reach.add(i)
                break
    return reach


def _u_hypercenter_index(L: SubgroupLattice, x: int) -> int:
    key = ("ZU", x)
    if key not in L._cache:
        reach = _prime_step_reachable(L, x, 0)
        cur = 0
        for i in reach:
            cur = L.join(cur, i)
        assert cur in reach, "the join of U-central normal subgroups must be U-central"
        L._cache[key] = cur
    return L._cache[key]


def u_hypercenter(X) -> SubgroupRef:
    """Largest normal subgroup all of whose chief factors below it have prime order."""
    L, x = _lat(X)
    return L.subgroups[_u_hypercenter_index(L, x)]


def quotient_is_supersolvable(L: SubgroupLattice, x: int, e: int) -> bool:
    """``X/E`` supersolvable, read off the normal subgroups of ``X`` above ``E``."""
    return x in _prime_step_reachable(L, x, e)


def o_p_prime(X, p: int) -> SubgroupRef:
    """Largest normal subgroup of order coprime to ``p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    L, x = _lat(X)
    cur = 0
    for i in L.normal_in(x):
        if L.orders[i] % p:
            cur = L.join(cur, i)
    assert L.orders[cur] % p and L.is_normal_in(cur, x)
    return L.subgroups[cur]
