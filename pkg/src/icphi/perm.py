"""Permutations, permutation groups and elementwise subgroup constructions.

Composition is apply-left-first: ``compose(a, b)`` sends ``i`` to
``b[a[i]]``, so ``a * b`` means "do ``a``, then ``b``".  Every group
carries a dense index over its elements (lexicographic order of the image
tuples, identity at index 0) and a Cayley table on those indices.  Subgroups
are bitmasks over that index.
"""

from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ORDER_BUDGET = 360


class BudgetError(RuntimeError):
    """Raised instead of running an enumeration past its size budget."""


class Permutation:
    """A bijection on ``{0, ..., degree - 1}`` stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` first, then ``b``."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    bi = b.images
    return Permutation._trusted(tuple(bi[i] for i in a.images))


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def _closure_tuples(degree: int, gens: Sequence[tuple[int, ...]], budget: int | None) -> list[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)  # x then g
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
                if budget is not None and len(out) > budget:
                    raise BudgetError(f"group order exceeds budget {budget}")
    return out


def _closure_array(degree: int, gens: Sequence[tuple[int, ...]], budget: int | None) -> np.ndarray:
    """Breadth-first closure as an ``(n, degree)`` array, deduplicated row-exactly."""
    g_arr = [np.asarray(g, dtype=np.int32) for g in gens]
    ident = np.arange(degree, dtype=np.int32)
    seen = {ident.tobytes()}
    blocks = [ident[None, :]]
    frontier = ident[None, :]
    total = 1
    while len(frontier):
        fresh = []
        for g in g_arr:
            for row in g[frontier]:  # x then g
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    fresh.append(row)
        total += len(fresh)
        if budget is not None and total > budget:
            raise BudgetError(f"group order exceeds budget {budget}")
        frontier = np.array(fresh, dtype=np.int32).reshape(-1, degree)
        blocks.append(frontier)
    return np.concatenate(blocks)


_HASH_MULT = np.uint64(0x9E3779B97F4A7C15)


def _cayley_table(arr: np.ndarray) -> np.ndarray:
    """Products of the (sorted, distinct) rows of ``arr``, as row indices.

    Rows are looked up through a multiplicative hash; every product is a
    group element, so distinct hashes on the element list make this exact.
    """
    n, d = arr.shape
    with np.errstate(over="ignore"):
        w = np.cumprod(np.full(d, _HASH_MULT, dtype=np.uint64)) | np.uint64(1)
        keys = (arr.astype(np.uint64) * w).sum(axis=1)
    order = np.argsort(keys)
    skeys = keys[order]
    table = np.empty((n, n), dtype=np.int32)
    if len(np.unique(skeys)) != n:
        index = {r.tobytes(): i for i, r in enumerate(arr)}
        for i in range(n):
            table[i] = [index[r.tobytes()] for r in arr[:, arr[i]]]
        return table
    with np.errstate(over="ignore"):
        for i in range(n):
            k = (arr[:, arr[i]].astype(np.uint64) * w).sum(axis=1)  # row j is e_i then e_j
            table[i] = order[np.searchsorted(skeys, k)]
    return table


def closure(degree: int, gens: Sequence[Permutation], budget: int | None = None) -> tuple[Permutation, ...]:
    """Elements of the group generated by ``gens``, in breadth-first word order.

    Words are right-multiplied by generators starting from the identity, so
    the result is deterministic for a fixed generator list.
    """
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
    raw = _closure_tuples(degree, [g.images for g in gens], budget)
    return tuple(Permutation._trusted(t) for t in raw)


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def is_prime_power(n: int) -> bool:
    return n > 1 and len(prime_factors(n)) == 1


def omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    k = 0
    for p in prime_factors(n):
        while n % p == 0:
            n //= p
            k += 1
    return k


class FiniteGroup:
    """A permutation group with its full element list and Cayley table.

    ``table[i, j]`` is the index of ``elements[i] * elements[j]``.  The
    lattice of subgroups and other derived data are computed lazily and
    cached; none of it changes the group.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], name: str | None = None,
                 budget: int | None = ORDER_BUDGET):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if not gens:
            gens = [Permutation.identity(degree)]
        arr = _closure_array(degree, [g.images for g in gens], budget)
        arr = arr[np.lexsort(arr.T[::-1])]
        raw = [tuple(r) for r in arr.tolist()]
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.name = name
        self.elements: tuple[Permutation, ...] = tuple(Permutation._trusted(t) for t in raw)
        self._index = {t: i for i, t in enumerate(raw)}
        self.table = _cayley_table(arr)  # table[i, j] = e_i then e_j
        self.inv = np.argmax(self.table == 0, axis=1).astype(np.int32)
        idx = self._index
        self.generator_indices: tuple[int, ...] = tuple(idx[g.images] for g in gens)
        self._cols = None

    # -- basic data ---------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<FiniteGroup {label} order={self.order} degree={self.degree}>"

    def index(self, p: Permutation | Sequence[int]) -> int:
        images = p.images if isinstance(p, Permutation) else tuple(p)
        return self._index[images]

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._index

    @cached_property
    def primes(self) -> list[int]:
        """Prime divisors of the order, ascending."""
        return prime_factors(self.order)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n, dtype=np.int32)
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.table[cur, np.arange(n)]
            k += 1
        return orders

    @cached_property
    def comm_table(self) -> np.ndarray:
        """``comm_table[a, b]`` is the index of ``a^-1 b^-1 a b``."""
        T = self.table
        ar = np.arange(self.order)
        return T[T[T[self.inv[:, None], self.inv[None, :]], ar[:, None]], ar[None, :]]

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[g, x]`` is the index of ``g^-1 x g``."""
        T = self.table
        ar = np.arange(self.order)
        return T[T[self.inv[:, None], ar[None, :]], ar[:, None]]

    @cached_property
    def square(self) -> np.ndarray:
        ar = np.arange(self.order)
        return self.table[ar, ar]

    @property
    def columns(self) -> list[list[int]]:
        if self._cols is None:
            self._cols = [self.table[:, g].tolist() for g in range(self.order)]
        return self._cols

    # -- masks --------------------------------------------------------------
    def mask_of(self, indices: Iterable[int]) -> int:
        flags = np.zeros(self.order, dtype=bool)
        flags[np.fromiter(indices, dtype=np.int64)] = True
        return bool_to_mask(flags)

    def indices_of(self, mask: int) -> np.ndarray:
        return mask_to_indices(mask, self.order)

    def generate(self, gens: Iterable[int]) -> int:
        """Mask of the subgroup generated by the element indices ``gens``."""
        cols = self.columns
        gens = [int(g) for g in gens if g != 0]
        seen = 1
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = cols[g][x]
                    if not (seen >> y) & 1:
                        seen |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return seen

    # -- subgroups ----------------------------------------------------------
    def subgroup(self, gens: Iterable[Permutation | int]) -> SubgroupRef:
        idx = [g if isinstance(g, (int, np.integer)) else self.index(g) for g in gens]
        return SubgroupRef(self, self.generate(idx), tuple(int(i) for i in idx))

    def subgroup_from_mask(self, mask: int) -> SubgroupRef:
        return SubgroupRef(self, mask)

    @cached_property
    def whole(self) -> SubgroupRef:
        return SubgroupRef(self, self.full_mask, self.generator_indices)

    @cached_property
    def trivial(self) -> SubgroupRef:
        return SubgroupRef(self, 1, ())

    @cached_property
    def lattice(self):
        from .lattice import all_subgroups

        return all_subgroups(self)


def bool_to_mask(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def mask_to_indices(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
    return np.flatnonzero(bits[:n])


def mask_to_bool(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
    return bits[:n].astype(bool)


class SubgroupRef:
    """A subgroup of ``parent`` given by a bitmask over the parent's elements."""

    __slots__ = ("parent", "mask", "_gens", "_order")

    def __init__(self, parent: FiniteGroup, mask: int, generators: Sequence[int] | None = None):
        self.parent = parent
        self.mask = mask
        self._order = mask.bit_count()
        if not mask & 1:
            raise ValueError("subgroup must contain the identity")
        if parent.order % self._order:
            raise AssertionError(f"Lagrange violated: {self._order} does not divide {parent.order}")
        self._gens = None if generators is None else tuple(int(g) for g in generators)

    @property
    def order(self) -> int:
        return self._order

    @property
    def generators(self) -> tuple[int, ...]:
        """Element indices generating this subgroup (chosen greedily if not given)."""
        if self._gens is None:
            self._gens = greedy_generators(self.parent, self.mask)
        return self._gens

    @property
    def indices(self) -> np.ndarray:
        return self.parent.indices_of(self.mask)

    @property
    def elements(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.indices)

    def __contains__(self, item) -> bool:
        i = item if isinstance(item, (int, np.integer)) else self.parent.index(item)
        return bool((self.mask >> int(i)) & 1)

    def __le__(self, other: SubgroupRef) -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: SubgroupRef) -> bool:
        return self <= other and self.mask != other.mask

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupRef) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def __and__(self, other: SubgroupRef) -> SubgroupRef:
        return SubgroupRef(self.parent, self.mask & other.mask)

    def is_trivial(self) -> bool:
        return self.mask == 1

    def conjugate(self, g: int | Permutation) -> SubgroupRef:
        """``g^-1 H g``."""
        G = self.parent
        gi = g if isinstance(g, (int, np.integer)) else G.index(g)
        return SubgroupRef(G, G.mask_of(G.conj_table[gi, self.indices]))

    def as_group(self, name: str | None = None) -> FiniteGroup:
        G = self.parent
        return FiniteGroup(G.degree, [G.elements[i] for i in self.generators], name=name)

    def describe(self) -> str:
        gens = ", ".join(repr(self.parent.elements[i]) for i in self.generators) or "()"
        return f"<order {self.order}: {gens}>"

    def __repr__(self) -> str:
        return f"SubgroupRef{self.describe()}"


def greedy_generators(G: FiniteGroup, mask: int) -> tuple[int, ...]:
    """A short generating tuple: repeatedly adjoin a highest-order missing element."""
    orders = G.element_orders
    members = [int(i) for i in G.indices_of(mask)]
    members.sort(key=lambda i: (-orders[i], i))
    cur = 1
    gens: list[int] = []
    for x in members:
        if cur == mask:
            break
        if not (cur >> x) & 1:
            gens.append(x)
            cur = G.generate(gens)
    return tuple(gens)


def _ambient(X: FiniteGroup | SubgroupRef) -> SubgroupRef:
    return X.whole if isinstance(X, FiniteGroup) else X


def commutator_subgroup(H: SubgroupRef, K: SubgroupRef) -> SubgroupRef:
    """``[H, K]``: the subgroup generated by all ``h^-1 k^-1 h k``."""
    if H.parent is not K.parent:
        raise ValueError("subgroups of different groups")
    G = H.parent
    vals = np.unique(G.comm_table[np.ix_(H.indices, K.indices)])
    return SubgroupRef(G, G.generate(vals.tolist()))


def centralizer(X: FiniteGroup | SubgroupRef, H: SubgroupRef) -> SubgroupRef:
    """Elements of ``X`` commuting with every element of ``H``."""
    A = _ambient(X)
    G = A.parent
    gens = list(H.generators)
    flags = (G.comm_table[:, gens] == 0).all(axis=1) if gens else np.ones(G.order, dtype=bool)
    return SubgroupRef(G, bool_to_mask(flags) & A.mask)


def center(X: FiniteGroup | SubgroupRef) -> SubgroupRef:
    return centralizer(X, _ambient(X))


def normalizer(X: FiniteGroup | SubgroupRef, H: SubgroupRef) -> SubgroupRef:
    """Elements ``g`` of ``X`` with ``g^-1 H g = H``."""
    A = _ambient(X)
    G = A.parent
    inside = mask_to_bool(H.mask, G.order)
    gens = list(H.generators)
    flags = inside[G.conj_table[:, gens]].all(axis=1) if gens else np.ones(G.order, dtype=bool)
    N = SubgroupRef(G, bool_to_mask(flags) & A.mask)
    C = centralizer(A, H)
    assert C <= N and normalizer_contains(N, C), "centralizer must be normal in normalizer"
    return N


def normalizer_contains(N: SubgroupRef, C: SubgroupRef) -> bool:
    """True when every generator of ``N`` conjugates ``C`` into itself."""
    G = N.parent
    inside = mask_to_bool(C.mask, G.order)
    cg = list(C.generators)
    if not cg:
        return True
    return bool(inside[G.conj_table[np.ix_(list(N.generators), cg)]].all())
