"""Subgroup lattices and the structure read off them.

Subgroups are found by cyclic extension: every subgroup ``H`` of a
solvable group has a normal subgroup ``K`` of prime index, so ``H`` arises
from ``K`` by adjoining one element of ``N(K)`` whose power lands in ``K``.
For nonsolvable groups the perfect subgroups are seeded first (all perfect
groups within the order budget are 2-generated).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .perm import (
    ORDER_BUDGET,
    BudgetError,
    FiniteGroup,
    SubgroupRef,
    bool_to_mask,
    greedy_generators,
    is_prime,
    mask_to_bool,
    p_part,
)

SUBGROUP_BUDGET = 6000


@dataclass(frozen=True)
class MaximalChain:
    """Lattice indices ``H_0 < H_1 < ... < H_n = G``, each maximal in the next."""

    links: tuple[int, ...]


class SubgroupLattice:
    """All subgroups of a group, sorted by order then element set.

    Besides the subgroup list this keeps a boolean membership matrix and the
    inclusion matrix, which most relative computations (subgroups of a
    subgroup, normality inside a subgroup, closures) are phrased against.
    """

    def __init__(self, group: FiniteGroup, masks: list[int], gens: list[tuple[int, ...]]):
        self.group = group
        n = group.order
        order = sorted(range(len(masks)), key=lambda i: (masks[i].bit_count(), tuple(group.indices_of(masks[i]))))
        self.masks: list[int] = [masks[i] for i in order]
        self.subgroups: list[SubgroupRef] = [SubgroupRef(group, masks[i], gens[i]) for i in order]
        self.orders = np.array([m.bit_count() for m in self.masks], dtype=np.int64)
        self._pos = {m: i for i, m in enumerate(self.masks)}
        S = len(self.masks)
        M = np.zeros((S, n), dtype=bool)
        for i, m in enumerate(self.masks):
            M[i] = mask_to_bool(m, n)
        self.membership = M
        Mf = M.astype(np.float32)
        inter = Mf @ Mf.T
        # contains[i, j]: subgroup j lies inside subgroup i
        self.contains = inter == self.orders[None, :].astype(np.float32)
        self._strict = self.contains.copy()
        np.fill_diagonal(self._strict, False)
        self.covers: list[np.ndarray] = []
        for i in range(S):
            subs = np.flatnonzero(self._strict[i])
            if len(subs) == 0:
                self.covers.append(subs)
                continue
            block = self._strict[np.ix_(subs, subs)]
            self.covers.append(subs[~block.any(axis=0)])
        self._act = self._conjugation_action()
        self._cache: dict = {}

    # -- construction helpers ----------------------------------------------
    def _conjugation_action(self) -> list[np.ndarray]:
        G = self.group
        acts = []
        for g in G.generator_indices:
            # row of H^g at y is membership of g y g^-1 in H
            perm_cols = G.conj_table[G.inv[g]]
            conj_rows = self.membership[:, perm_cols]
            packed = np.packbits(conj_rows, axis=1, bitorder="little")
            acts.append(np.array([self._pos[int.from_bytes(r.tobytes(), "little")] for r in packed], dtype=np.int64))
        return acts

    # -- views -------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.masks)

    def index(self, H: SubgroupRef | int) -> int:
        mask = H if isinstance(H, int) else H.mask
        return self._pos[mask]

    def __getitem__(self, i: int) -> SubgroupRef:
        return self.subgroups[i]

    @cached_property
    def inclusion(self) -> frozenset[tuple[int, int]]:
        """Pairs ``(i, j)`` with subgroup ``i`` contained in subgroup ``j``."""
        jj, ii = np.nonzero(self.contains)
        return frozenset(zip(ii.tolist(), jj.tolist()))

    @cached_property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        S = len(self)
        seen = np.zeros(S, dtype=bool)
        classes = []
        for i in range(S):
            if seen[i]:
                continue
            orbit = [i]
            seen[i] = True
            queue = deque([i])
            while queue:
                j = queue.popleft()
                for act in self._act:
                    k = int(act[j])
                    if not seen[k]:
                        seen[k] = True
                        orbit.append(k)
                        queue.append(k)
            classes.append(tuple(sorted(orbit)))
        return classes

    @cached_property
    def normal_flags(self) -> np.ndarray:
        flags = np.ones(len(self), dtype=bool)
        ar = np.arange(len(self))
        for act in self._act:
            flags &= act == ar
        return flags

    @property
    def top(self) -> int:
        return len(self) - 1

    # -- relative machinery (ambient = any lattice member) -----------------
    def subs(self, x: int, proper: bool = False) -> np.ndarray:
        """Indices of subgroups inside subgroup ``x`` (ascending lattice order)."""
        row = self._strict[x] if proper else self.contains[x]
        return np.flatnonzero(row)

    def normalizer_mask(self, i: int) -> int:
        key = ("N", i)
        if key not in self._cache:
            self._cache[key] = normalizer_mask(self.group, self.masks[i], self.subgroups[i].generators)
        return self._cache[key]

    def is_normal_in(self, i: int, x: int) -> bool:
        """Subgroup ``i`` is normal in subgroup ``x`` (``i`` inside ``x`` assumed)."""
        if x == self.top:
            return bool(self.normal_flags[i])
        return self.masks[x] & ~self.normalizer_mask(i) == 0

    def normal_in(self, x: int) -> list[int]:
        key = ("normal_in", x)
        if key not in self._cache:
            if x == self.top:
                out = np.flatnonzero(self.normal_flags).tolist()
            else:
                out = [int(i) for i in self.subs(x) if self.is_normal_in(int(i), x)]
            self._cache[key] = out
        return self._cache[key]

    def smallest_containing(self, indices, within: int | None = None) -> int:
        """Lattice index of the subgroup generated by element ``indices``."""
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        rows = self.membership[:, idx].all(axis=1)
        if within is not None:
            rows &= self.contains[within]
        return int(np.argmax(rows))

    def join(self, i: int, j: int) -> int:
        m = self.masks[i] | self.masks[j]
        if m in self._pos:
            return self._pos[m]
        return self.smallest_containing(self.group.indices_of(m))

    @cached_property
    def _normal_rows(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.flatnonzero(self.normal_flags)
        return idx, self.membership[idx]

    def normal_closure_in(self, indices, x: int) -> int:
        """Smallest normal subgroup of subgroup ``x`` containing element ``indices``."""
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if x == self.top:
            nidx, rows = self._normal_rows
            return int(nidx[np.argmax(rows[:, idx].all(axis=1))])
        rows = self.membership[:, idx].all(axis=1) & self.contains[x]
        for i in np.flatnonzero(rows):
            if self.is_normal_in(int(i), x):
                return int(i)
        raise AssertionError("ambient subgroup is always a normal closure candidate")

    def frattini_of(self, i: int) -> int:
        key = ("Phi", i)
        if key not in self._cache:
            m = self.masks[i]
            for c in self.covers[i]:
                m &= self.masks[c]
            if not len(self.covers[i]):
                m = 1
            self._cache[key] = self._pos[m]
        return self._cache[key]

    def derived_of(self, i: int) -> int:
        key = ("D", i)
        if key not in self._cache:
            G = self.group
            gens = list(self.subgroups[i].generators)
            if not gens:
                self._cache[key] = 0
            else:
                vals = G.comm_table[np.ix_(gens, gens)].ravel()
                self._cache[key] = self.normal_closure_in(vals, i)
        return self._cache[key]

    def bracket(self, h: int, x: int) -> int:
        """``[H, X]``, generated by all ``[h, x]`` (both lattice indices)."""
        key = ("br", h, x)
        if key not in self._cache:
            vals = np.unique(self.group.comm_table[np.ix_(self.subgroups[h].indices, self.subgroups[x].indices)])
            self._cache[key] = 0 if len(vals) == 1 else self.smallest_containing(vals)
        return self._cache[key]

    def centralizer_flags(self, h: int) -> np.ndarray:
        """Elements of the group commuting with every element of subgroup ``h``."""
        key = ("Cflags", h)
        if key not in self._cache:
            self._cache[key] = (self.group.comm_table[self.subgroups[h].indices] == 0).all(axis=0)
        return self._cache[key]

    def of_order(self, order: int, within: int | None = None) -> list[int]:
        rows = self.orders == order
        if within is not None:
            rows &= self.contains[within]
        return np.flatnonzero(rows).tolist()

    def sylow_of(self, x: int, p: int) -> int:
        target = p_part(int(self.orders[x]), p)
        return self.of_order(target, within=x)[0]

    def is_cyclic_index(self, i: int) -> bool:
        return bool((self.group.element_orders[self.subgroups[i].indices] == self.orders[i]).any())

    def n_maximal_of(self, x: int, n: int) -> list[int]:
        level = {x}
        for _ in range(n):
            nxt: set[int] = set()
            for h in level:
                nxt.update(int(c) for c in self.covers[h])
            level = nxt
        return sorted(level)


def normalizer_mask(G: FiniteGroup, mask: int, gens) -> int:
    gens = list(gens)
    if not gens:
        return G.full_mask
    inside = mask_to_bool(mask, G.order)
    return bool_to_mask(inside[G.conj_table[:, gens]].all(axis=1))


def _is_solvable_group(G: FiniteGroup) -> bool:
    cur = G.full_mask
    gens = list(G.generator_indices)
    while True:
        if cur == 1:
            return True
        vals = np.unique(G.comm_table[np.ix_(gens, gens)]).tolist()
        # normal closure inside the current term: close under conjugation by its generators
        nxt = G.generate(_conjugate_closure(G, vals, gens))
        if nxt == cur:
            return False
        cur = nxt
        gens = list(greedy_generators(G, cur))


def _conjugate_closure(G: FiniteGroup, vals: list[int], by: list[int]) -> list[int]:
    out = set(vals)
    frontier = list(out)
    while frontier:
        nxt = []
        for v in frontier:
            for g in by:
                w = int(G.conj_table[g, v])
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(out)


def _perfect_seeds(G: FiniteGroup) -> dict[int, tuple[int, ...]]:
    """Nontrivial perfect subgroups of ``G``, found as 2-generated subgroups."""
    n = G.order
    reps = []
    seen = np.zeros(n, dtype=bool)
    for x in range(1, n):
        if not seen[x]:
            reps.append(x)
            seen[G.conj_table[:, x]] = True
    found: dict[int, tuple[int, int]] = {}
    for x in reps:
        for y in range(1, n):
            m = G.generate([x, y])
            if m not in found:
                found[m] = (x, y)
    seeds: dict[int, tuple[int, ...]] = {}
    for m, (x, y) in found.items():
        if m.bit_count() < 60:
            continue
        gens = [x, y]
        vals = np.unique(G.comm_table[np.ix_(gens, gens)]).tolist()
        if G.generate(_conjugate_closure(G, vals, gens)) == m:
            for g in range(n):
                cm = G.mask_of(G.conj_table[g, G.indices_of(m)])
                if cm not in seeds:
                    seeds[cm] = (int(G.conj_table[g, x]), int(G.conj_table[g, y]))
    return seeds


def all_subgroups(G: FiniteGroup, budget: int = SUBGROUP_BUDGET) -> SubgroupLattice:
    """Every subgroup of ``G``, each exactly once."""
    if G.order > ORDER_BUDGET:
        raise BudgetError(f"order {G.order} exceeds budget {ORDER_BUDGET}")
    n = G.order
    cols = G.columns
    conj = G.conj_table
    found: dict[int, tuple[int, ...]] = {1: ()}
    queue = deque([1])
    if not _is_solvable_group(G):
        for m, gens in _perfect_seeds(G).items():
            found[m] = gens
            queue.append(m)
    while queue:
        K = queue.popleft()
        kgens = found[K]
        kidx = G.indices_of(K)
        kflags = mask_to_bool(K, n)
        if kgens:
            nflags = kflags[conj[:, list(kgens)]].all(axis=1)
        else:
            nflags = np.ones(n, dtype=bool)
        covered = K
        for x in np.flatnonzero(nflags & ~kflags).tolist():
            if (covered >> x) & 1:
                continue
            m, y = 1, x
            while not kflags[y]:
                y = cols[x][y]
                m += 1
            if not is_prime(m):
                continue
            new = K
            y = x
            for _ in range(m - 1):
                new |= G.mask_of(G.table[kidx, y])
                y = cols[x][y]
            covered |= new
            if new not in found:
                found[new] = kgens + (x,)
                queue.append(new)
                if len(found) > budget:
                    raise BudgetError(f"more than {budget} subgroups")
    masks = list(found)
    return SubgroupLattice(G, masks, [found[m] for m in masks])


# -- operations ---------------------------------------------------------------

def _lat(X) -> tuple[SubgroupLattice, int]:
    if isinstance(X, SubgroupLattice):
        return X, X.top
    if isinstance(X, FiniteGroup):
        L = X.lattice
        return L, L.top
    L = X.parent.lattice
    return L, L.index(X)


def maximal_subgroups(X) -> list[SubgroupRef]:
    L, x = _lat(X)
    return [L.subgroups[int(i)] for i in L.covers[x]]


def n_maximal_subgroups(X, n: int) -> list[SubgroupRef]:
    """Subgroups at the bottom of some length-``n`` maximal chain ending at the top."""
    if n < 1:
        raise ValueError("n must be positive")
    L, x = _lat(X)
    return [L.subgroups[i] for i in L.n_maximal_of(x, n)]


def maximal_chain(X, H: SubgroupRef) -> MaximalChain | None:
    """Some maximal chain from ``H`` up to the ambient group, or ``None``."""
    L, x = _lat(X)
    h = L.index(H)
    prev: dict[int, int] = {x: -1}
    queue = deque([x])
    while queue:
        k = queue.popleft()
        if k == h:
            links = [k]
            while prev[links[-1]] != -1:
                links.append(prev[links[-1]])
            return MaximalChain(tuple(links))
        for c in L.covers[k]:
            c = int(c)
            if c not in prev and L.contains[c, h]:
                prev[c] = k
                queue.append(c)
    return None


def frattini(X) -> SubgroupRef:
    """Intersection of the maximal subgroups; trivial for the trivial group."""
    L, x = _lat(X)
    return L.subgroups[L.frattini_of(x)]


def is_normal(H: SubgroupRef, X) -> bool:
    L, x = _lat(X)
    return L.is_normal_in(L.index(H), x)


def normal_subgroups(X) -> list[SubgroupRef]:
    L, x = _lat(X)
    return [L.subgroups[i] for i in L.normal_in(x)]


def minimal_normal_subgroups(X) -> list[SubgroupRef]:
    L, x = _lat(X)
    normals = [i for i in L.normal_in(x) if i != 0]
    out = []
    for i in normals:
        if not any(j != i and L.contains[i, j] for j in normals):
            out.append(L.subgroups[i])
    return out


def core(X, H: SubgroupRef) -> SubgroupRef:
    """Largest normal subgroup of ``X`` inside ``H``."""
    L, x = _lat(X)
    h = L.index(H)
    best = 0
    for i in L.normal_in(x):
        if L.contains[h, i]:
            best = i
    return L.subgroups[best]


def normal_closure(X, H: SubgroupRef) -> SubgroupRef:
    L, x = _lat(X)
    return L.subgroups[L.normal_closure_in(H.indices, x)]


def is_subnormal(X, H: SubgroupRef) -> bool:
    """Iterate ``K -> normal closure of H in K`` from the ambient group."""
    L, x = _lat(X)
    h = L.index(H)
    idx = H.indices
    k = x
    while True:
        nxt = L.normal_closure_in(idx, k)
        if nxt == k:
            return k == h
        k = nxt


def sylow_subgroup(X, p: int) -> SubgroupRef:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    L, x = _lat(X)
    return L.subgroups[L.sylow_of(x, p)]


def is_simple(X) -> bool:
    L, x = _lat(X)
    return x != 0 and len(L.normal_in(x)) == 2
