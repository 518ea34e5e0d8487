"""Group-class predicates, fingerprints, isomorphism and automorphisms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .lattice import SubgroupLattice, _conjugate_closure, _lat
from .perm import (
    ORDER_BUDGET,
    BudgetError,
    FiniteGroup,
    Permutation,
    SubgroupRef,
    _closure_tuples,
    is_prime,
    mask_to_bool,
    p_part,
    prime_factors,
)
from .series import (
    _chief_chain,
    _is_nilpotent_index,
    _is_solvable_index,
    o_p_prime,
)

ISO_NODE_BUDGET = 200_000
AUT_GROUP_ORDER_LIMIT = 60


# -- index-level predicates (lattice L, ambient subgroup x) -------------------

def _is_abelian_index(L: SubgroupLattice, x: int) -> bool:
    return L.derived_of(x) == 0


def _is_cyclic_index(L: SubgroupLattice, x: int) -> bool:
    return L.is_cyclic_index(x)


def _is_elementary_abelian_index(L: SubgroupLattice, x: int) -> bool:
    if not _is_abelian_index(L, x):
        return False
    orders = L.group.element_orders[L.subgroups[x].indices]
    nontrivial = set(orders[orders > 1].tolist())
    return len(nontrivial) <= 1 and all(is_prime(o) for o in nontrivial)


def _is_supersolvable_index(L: SubgroupLattice, x: int) -> bool:
    key = ("ss", x)
    if key not in L._cache:
        if x == 0:
            L._cache[key] = True
        else:
            chain = _chief_chain(L, x)
            L._cache[key] = all(is_prime(int(L.orders[b] // L.orders[a])) for a, b in zip(chain, chain[1:]))
    return L._cache[key]


def _o_p_prime_index(L: SubgroupLattice, x: int, p: int) -> int:
    key = ("Op'", x, p)
    if key not in L._cache:
        L._cache[key] = L.index(o_p_prime(L.subgroups[x], p))
    return L._cache[key]


def _is_p_nilpotent_index(L: SubgroupLattice, x: int, p: int) -> bool:
    n = int(L.orders[x])
    return int(L.orders[_o_p_prime_index(L, x, p)]) == n // p_part(n, p)


def _is_q8_index(L: SubgroupLattice, x: int) -> bool:
    if L.orders[x] != 8 or _is_abelian_index(L, x):
        return False
    orders = L.group.element_orders[L.subgroups[x].indices]
    return int((orders == 2).sum()) == 1


def _is_generalized_quaternion_index(L: SubgroupLattice, x: int) -> bool:
    n = int(L.orders[x])
    if n < 8 or p_part(n, 2) != n or _is_cyclic_index(L, x):
        return False
    return len(L.of_order(2, within=x)) == 1


def _has_quaternion_presentation(L: SubgroupLattice, x: int) -> bool:
    """``<a, b | a^(2m) = 1, b^2 = a^m, b^-1 a b = a^-1>`` with ``|x| = 4m >= 8``."""
    G = L.group
    n = int(L.orders[x])
    if n < 8 or p_part(n, 2) != n:
        return False
    idx = L.subgroups[x].indices
    orders = G.element_orders
    for a in idx[orders[idx] == n // 2].tolist():
        cyc = L.smallest_containing([a])
        inside = mask_to_bool(L.masks[cyc], G.order)
        pw = 0
        for _ in range(n // 4):
            pw = int(G.table[pw, a])
        for b in idx[~inside[idx]].tolist():
            if G.square[b] == pw and G.conj_table[b, a] == G.inv[a]:
                return True
    return False


def _q8_free_index(L: SubgroupLattice, x: int) -> bool:
    """No ``Q8`` section; searched inside one Sylow 2-subgroup of ``x``.

    Any ``Q8`` section ``H/N`` is covered by a Sylow 2-subgroup ``S`` of
    ``H`` via ``S/(S & N)``, and ``S`` is conjugate into the chosen Sylow.
    """
    key = ("q8free", x)
    if key in L._cache:
        return L._cache[key]
    G = L.group
    P = L.sylow_of(x, 2)
    free = True
    if L.orders[P] >= 8:
        for h in L.subs(P).tolist():
            if L.orders[h] < 8 or _is_abelian_index(L, h):
                continue
            d = L.derived_of(h)
            hidx = L.subgroups[h].indices
            for nsub in L.of_order(int(L.orders[h]) // 8, within=h):
                if L.contains[nsub, d] or not L.is_normal_in(nsub, h):
                    continue
                inN = L.membership[nsub]
                involutions = int((inN[G.square[hidx]] & ~inN[hidx]).sum())
                if involutions == L.orders[nsub]:
                    free = False
                    break
            if not free:
                break
    L._cache[key] = free
    return free


def _is_minimal_non_nilpotent_index(L: SubgroupLattice, x: int) -> bool:
    if _is_nilpotent_index(L, x):
        return False
    return all(_is_nilpotent_index(L, int(m)) for m in L.covers[x])


# -- public predicates ----------------------------------------------------------

def is_abelian(X) -> bool:
    return _is_abelian_index(*_lat(X))


def is_cyclic(X) -> bool:
    return _is_cyclic_index(*_lat(X))


def is_elementary_abelian(X) -> bool:
    return _is_elementary_abelian_index(*_lat(X))


def is_nilpotent(X) -> bool:
    """Every Sylow subgroup is normal."""
    return _is_nilpotent_index(*_lat(X))


def is_solvable(X) -> bool:
    """The derived series reaches the trivial group."""
    return _is_solvable_index(*_lat(X))


def is_supersolvable(X) -> bool:
    """Every chief factor has prime order."""
    return _is_supersolvable_index(*_lat(X))


def is_p_nilpotent(X, p: int) -> bool:
    """``X`` has a normal ``p``-complement."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    L, x = _lat(X)
    return _is_p_nilpotent_index(L, x, p)


def is_2_closed(X) -> bool:
    L, x = _lat(X)
    return L.is_normal_in(L.sylow_of(x, 2), x)


def is_q8(X) -> bool:
    return _is_q8_index(*_lat(X))


def is_generalized_quaternion(X) -> bool:
    return _is_generalized_quaternion_index(*_lat(X))


def is_q8_free(X) -> bool:
    return _q8_free_index(*_lat(X))


def is_minimal_non_nilpotent(X) -> bool:
    return _is_minimal_non_nilpotent_index(*_lat(X))


def is_p_group(X) -> bool:
    L, x = _lat(X)
    return len(prime_factors(int(L.orders[x]))) <= 1


# -- fingerprints ---------------------------------------------------------------

@dataclass(frozen=True)
class GroupFingerprint:
    """Isomorphism invariants; equal fingerprints are necessary, not sufficient."""

    order: int
    element_orders: tuple[tuple[int, int], ...]
    center_order: int
    derived_order: int
    abelianization: tuple[int, ...]
    subgroup_counts: tuple[tuple[int, int], ...] | None = None


def abelian_invariants(order_counts: dict[int, int]) -> tuple[int, ...]:
    """Prime-power invariants of an abelian group from its element-order census."""
    total = sum(order_counts.values())
    out = []
    for p in prime_factors(total):
        logs = [0]
        k = 1
        while True:
            n_k = sum(c for o, c in order_counts.items() if (p ** k) % o == 0 and p_part(o, p) == o)
            lk = round(np.log(n_k) / np.log(p))
            if lk == logs[-1]:
                break
            logs.append(lk)
            k += 1
        ranks = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        for e in range(1, len(ranks)):
            out += [p ** e] * (ranks[e - 1] - ranks[e])
    return tuple(sorted(out))


def _plain_fingerprint(G: FiniteGroup) -> tuple:
    cache = G.__dict__.setdefault("_fp_cache", {})
    if "plain" not in cache:
        n = G.order
        eo = Counter(G.element_orders.tolist())
        center = int((G.comm_table == 0).all(axis=1).sum())
        gens = list(G.generator_indices)
        vals = np.unique(G.comm_table[np.ix_(gens, gens)]).tolist()
        dmask = G.generate(_conjugate_closure(G, vals, gens))
        dflags = mask_to_bool(dmask, n)
        dsize = dmask.bit_count()
        # order of each coset modulo the derived subgroup
        cur = np.arange(n)
        mod_order = np.zeros(n, dtype=np.int64)
        k = 1
        while (mod_order == 0).any():
            hit = dflags[cur] & (mod_order == 0)
            mod_order[hit] = k
            cur = G.table[cur, np.arange(n)]
            k += 1
        ab_counts = {o: c // dsize for o, c in Counter(mod_order.tolist()).items()}
        cache["plain"] = (n, tuple(sorted(eo.items())), center, dsize, abelian_invariants(ab_counts))
        cache["derived_mask"] = dmask
    return cache["plain"]


def fingerprint(G: FiniteGroup, with_subgroups: bool = True) -> GroupFingerprint:
    plain = _plain_fingerprint(G)
    counts = None
    if with_subgroups:
        counts = tuple(sorted(Counter(G.lattice.orders.tolist()).items()))
    return GroupFingerprint(*plain, subgroup_counts=counts)


def _element_invariants(G: FiniteGroup) -> list[tuple]:
    cache = G.__dict__.setdefault("_fp_cache", {})
    if "elem" not in cache:
        _plain_fingerprint(G)
        n = G.order
        commute = G.comm_table == 0
        cent = commute.sum(axis=1)
        roots = np.bincount(G.square, minlength=n)
        dflags = mask_to_bool(cache["derived_mask"], n)
        orders = G.element_orders
        # element-order census of each centralizer
        distinct = np.unique(orders)
        onehot = orders[:, None] == distinct[None, :]
        profile = commute.astype(np.int32) @ onehot.astype(np.int32)
        cache["elem"] = [(int(orders[i]), int(n // cent[i]), int(roots[i]), bool(dflags[i]), tuple(profile[i].tolist()))
                         for i in range(n)]
    return cache["elem"]


# -- isomorphism ------------------------------------------------------------------

def _search_generators(G: FiniteGroup, cand_count: dict[tuple, int]) -> list[int]:
    """Generators with few candidate images: rarest invariant class first, then highest order."""
    inv = _element_invariants(G)
    orders = G.element_orders
    ranked = sorted(range(1, G.order), key=lambda x: (cand_count[inv[x]], -orders[x], x))
    cur = 1
    gens: list[int] = []
    while cur != G.full_mask:
        x = next(x for x in ranked if not (cur >> x) & 1)
        gens.append(x)
        cur = G.generate(gens)
    return gens


def _extend(G: FiniteGroup, H: FiniteGroup, gens: list[int], imgs: list[int]) -> dict[int, int] | None:
    cg, ch = G.columns, H.columns
    phi = {0: 0}
    used = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            px = phi[x]
            for g, h in zip(gens, imgs):
                y = cg[g][x]
                py = ch[h][px]
                if y in phi:
                    if phi[y] != py:
                        return None
                elif py in used:
                    return None
                else:
                    phi[y] = py
                    used.add(py)
                    nxt.append(y)
        frontier = nxt
    return phi


def _isomorphisms(G: FiniteGroup, H: FiniteGroup, find_all: bool, node_budget: int):
    if G.order != H.order:
        return []
    invG, invH = _element_invariants(G), _element_invariants(H)
    cH = Counter(invH)
    if Counter(invG) != cH:
        return []
    if G.order == 1:
        return [np.zeros(1, dtype=np.int64)]
    gens = _search_generators(G, cH)
    by_inv: dict[tuple, list[int]] = {}
    for y, k in enumerate(invH):
        by_inv.setdefault(k, []).append(y)
    cands = [by_inv[invG[g]] for g in gens]
    found = []
    nodes = 0

    def rec(depth: int, imgs: list[int]) -> bool:
        nonlocal nodes
        for y in cands[depth]:
            nodes += 1
            if nodes > node_budget:
                raise BudgetError(f"isomorphism search exceeded {node_budget} nodes")
            trial = imgs + [y]
            phi = _extend(G, H, gens[: depth + 1], trial)
            if phi is None:
                continue
            if depth + 1 == len(gens):
                if len(phi) == G.order:
                    arr = np.empty(G.order, dtype=np.int64)
                    for k, v in phi.items():
                        arr[k] = v
                    found.append(arr)
                    if not find_all:
                        return True
            elif rec(depth + 1, trial):
                return True
        return False

    rec(0, [])
    return found


def isomorphic(G: FiniteGroup, H: FiniteGroup, node_budget: int = ISO_NODE_BUDGET) -> bool:
    """Fingerprint prefilter, then a backtracking search over generator images.

    Raises ``BudgetError`` rather than guessing when the search is too large.
    """
    if G.order != H.order:
        return False
    if _plain_fingerprint(G) != _plain_fingerprint(H):
        return False
    if "lattice" in G.__dict__ and "lattice" in H.__dict__:
        if fingerprint(G) != fingerprint(H):
            return False
    return bool(_isomorphisms(G, H, find_all=False, node_budget=node_budget))


def isomorphism(G: FiniteGroup, H: FiniteGroup, node_budget: int = ISO_NODE_BUDGET) -> np.ndarray | None:
    """An isomorphism as an index map ``G -> H``, or ``None``."""
    found = _isomorphisms(G, H, find_all=False, node_budget=node_budget)
    return found[0] if found else None


def automorphisms(G: FiniteGroup, node_budget: int = ISO_NODE_BUDGET) -> list[tuple[int, ...]]:
    """Every automorphism of ``G`` as a tuple of element-index images."""
    return [tuple(a.tolist()) for a in _isomorphisms(G, G, find_all=True, node_budget=node_budget)]


def automorphism_group(G: FiniteGroup, node_budget: int = ISO_NODE_BUDGET) -> FiniteGroup:
    """``Aut(G)`` as a permutation group on the ``|G|`` elements of ``G``."""
    if G.order > AUT_GROUP_ORDER_LIMIT:
        raise BudgetError(f"automorphism groups limited to |G| <= {AUT_GROUP_ORDER_LIMIT}")
    auts = automorphisms(G, node_budget)
    if len(auts) > ORDER_BUDGET:
        raise BudgetError(f"|Aut(G)| = {len(auts)} exceeds {ORDER_BUDGET}")
    gens: list[tuple[int, ...]] = []
    size = 1
    for a in auts:
        if size == len(auts):
            break
        trial = gens + [a]
        closure = _closure_tuples(G.order, trial, None)
        if len(closure) > size:
            gens, size = trial, len(closure)
    return FiniteGroup(G.order, [Permutation(a) for a in gens] or [Permutation.identity(G.order)],
                       name=f"Aut({G.name or 'G'})")
