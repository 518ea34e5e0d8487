"""Group constructors, the verification corpus and its on-disk format.

Recipe labels double as a small grammar, so every corpus member can be
rebuilt from its provenance string::

    C6   D4 (dihedral, order 8)   Dic12   S4   A5   C2^3   Q8   SL(2,3)
    (C3 x C2)   (C3 : C2)#1   (semidirect product, action index 1)
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .classify import (
    AUT_GROUP_ORDER_LIMIT,
    _element_invariants,
    _plain_fingerprint,
    automorphisms,
    isomorphic,
)
from .perm import ORDER_BUDGET, BudgetError, FiniteGroup, Permutation, greedy_generators

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ACTION_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class GroupRecipe:
    kind: str
    params: tuple[int, ...] = ()
    children: tuple["GroupRecipe", ...] = ()
    name: str | None = None

    @property
    def order(self) -> int:
        k, p = self.kind, self.params
        if k == "cyclic":
            return p[0]
        if k == "dihedral":
            return 2 * p[0]
        if k == "dicyclic":
            return p[0]
        if k == "symmetric":
            return math.factorial(p[0])
        if k == "alternating":
            return max(1, math.factorial(p[0]) // 2)
        if k == "elementary_abelian":
            return p[0] ** p[1]
        if k in ("direct_product", "semidirect"):
            return self.children[0].order * self.children[1].order
        if k == "explicit":
            return {"Q8": 8, "SL(2,3)": 24}[self.name]
        raise ValueError(f"unknown recipe kind {k}")

    @property
    def label(self) -> str:
        k, p = self.kind, self.params
        if k == "cyclic":
            return f"C{p[0]}"
        if k == "dihedral":
            return f"D{p[0]}"
        if k == "dicyclic":
            return f"Dic{p[0]}"
        if k == "symmetric":
            return f"S{p[0]}"
        if k == "alternating":
            return f"A{p[0]}"
        if k == "elementary_abelian":
            return f"C{p[0]}^{p[1]}"
        if k == "direct_product":
            return f"({self.children[0].label} x {self.children[1].label})"
        if k == "semidirect":
            return f"({self.children[0].label} : {self.children[1].label})#{p[0]}"
        return self.name

    def __str__(self) -> str:
        return self.label


def cyclic(n: int) -> GroupRecipe:
    return GroupRecipe("cyclic", (n,))


def dihedral(n: int) -> GroupRecipe:
    """Symmetries of the ``n``-gon, order ``2n``."""
    return GroupRecipe("dihedral", (n,))


def dicyclic(order: int) -> GroupRecipe:
    return GroupRecipe("dicyclic", (order,))


def symmetric(n: int) -> GroupRecipe:
    return GroupRecipe("symmetric", (n,))


def alternating(n: int) -> GroupRecipe:
    return GroupRecipe("alternating", (n,))


def elementary_abelian(p: int, k: int) -> GroupRecipe:
    return GroupRecipe("elementary_abelian", (p, k))


def direct_product(a: GroupRecipe, b: GroupRecipe) -> GroupRecipe:
    return GroupRecipe("direct_product", (), (a, b))


def semidirect(a: GroupRecipe, b: GroupRecipe, action: int) -> GroupRecipe:
    return GroupRecipe("semidirect", (action,), (a, b))


Q8 = GroupRecipe("explicit", name="Q8")
SL23 = GroupRecipe("explicit", name="SL(2,3)")


# -- materialisation --------------------------------------------------------------

def _shift(p: Permutation, offset: int, degree: int) -> Permutation:
    images = list(range(degree))
    for i, j in enumerate(p.images):
        images[i + offset] = j + offset
    return Permutation(images)


def _regular(table: np.ndarray, gens: list[int], name: str) -> FiniteGroup:
    """Right regular representation of a group given by its Cayley table."""
    return FiniteGroup(len(table), [Permutation(table[:, g].tolist()) for g in gens], name=name)


def _dicyclic_table(order: int) -> np.ndarray:
    m = order // 2  # <a> has order 2n = m, elements a^k x^j -> index 2k + j
    n = order // 4
    T = np.empty((order, order), dtype=np.int64)
    for k, j, l, t in itertools.product(range(m), range(2), range(m), range(2)):
        if j == 0:
            kk, jj = k + l, t
        else:
            kk, jj = k - l, 1 + t
            if jj == 2:
                kk, jj = kk + n, 0
        T[2 * k + j, 2 * l + t] = 2 * (kk % m) + jj
    return T


def _sl23() -> FiniteGroup:
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}

    def act(M):
        return Permutation([pos[((v[0] * M[0][0] + v[1] * M[1][0]) % 3, (v[0] * M[0][1] + v[1] * M[1][1]) % 3)]
                            for v in vecs])

    return FiniteGroup(8, [act(((1, 1), (0, 1))), act(((1, 0), (1, 1)))], name="SL(2,3)")


def materialize(r: GroupRecipe, budget: int = ORDER_BUDGET) -> FiniteGroup:
    if r.order > budget:
        raise BudgetError(f"{r.label} has order {r.order} > {budget}")
    k, p = r.kind, r.params
    if k == "cyclic":
        n = p[0]
        G = FiniteGroup(n, [Permutation([(i + 1) % n for i in range(n)])], name=r.label)
    elif k == "dihedral":
        n = p[0]
        rot = Permutation([(i + 1) % n for i in range(n)])
        ref = Permutation([(-i) % n for i in range(n)])
        G = FiniteGroup(n, [rot, ref], name=r.label)
    elif k == "dicyclic":
        if p[0] % 4 or p[0] < 8:
            raise ValueError("dicyclic order must be a multiple of 4, at least 8")
        G = _regular(_dicyclic_table(p[0]), [2, 1], r.label)
    elif k in ("symmetric", "alternating"):
        n = p[0]
        if k == "symmetric":
            gens = [Permutation.from_cycles(n, tuple(range(n)))] + ([Permutation.from_cycles(n, (0, 1))] if n > 1 else [])
        else:
            gens = [Permutation.from_cycles(n, (0, 1, i)) for i in range(2, n)]
        G = FiniteGroup(max(n, 1), gens, name=r.label)
    elif k == "elementary_abelian":
        q, e = p
        deg = q * e
        gens = [_shift(Permutation([(i + 1) % q for i in range(q)]), q * j, deg) for j in range(e)]
        G = FiniteGroup(deg, gens, name=r.label)
    elif k == "direct_product":
        A, B = (materialize(c, budget) for c in r.children)
        deg = A.degree + B.degree
        gens = [_shift(g, 0, deg) for g in A.generators] + [_shift(g, A.degree, deg) for g in B.generators]
        G = FiniteGroup(deg, gens, name=r.label)
    elif k == "semidirect":
        A, B = (materialize(c, budget) for c in r.children)
        actions = enumerate_semidirect_actions(A, B)
        G = semidirect_product(A, B, actions[p[0]], name=r.label)
    elif k == "explicit":
        if r.name == "Q8":
            G = _regular(_dicyclic_table(8), [2, 1], "Q8")
        elif r.name == "SL(2,3)":
            G = _sl23()
        else:
            raise ValueError(f"no explicit group named {r.name}")
    else:
        raise ValueError(f"unknown recipe kind {k}")
    assert G.order == r.order, f"{r.label}: built order {G.order}, predicted {r.order}"
    return G


# -- semidirect products ------------------------------------------------------------

@dataclass(frozen=True)
class SemidirectAction:
    """A homomorphism ``B -> Aut(A)``; ``images[b]`` is the automorphism of ``b``.

    ``a`` acted on by ``b1 b2`` is ``(a . b1) . b2`` (a right action).
    """

    images: tuple[tuple[int, ...], ...]

    @property
    def is_trivial(self) -> bool:
        return all(img == tuple(range(len(img))) for img in self.images)


def _aut_orders(auts: np.ndarray) -> np.ndarray:
    """Order of each automorphism (rows of ``auts``) under composition."""
    m, n = auts.shape
    ident = np.arange(n)
    orders = np.zeros(m, dtype=np.int64)
    cur = auts.copy()
    k = 1
    while (orders == 0).any():
        hit = (cur == ident).all(axis=1) & (orders == 0)
        orders[hit] = k
        cur = np.take_along_axis(auts, cur, axis=1)  # cur then aut
        k += 1
    return orders


def enumerate_semidirect_actions(A: FiniteGroup, B: FiniteGroup,
                                 node_budget: int = ACTION_NODE_BUDGET) -> list[SemidirectAction]:
    """All homomorphisms ``B -> Aut(A)``, by backtracking over generator images.

    Each generator of ``B`` may only go to an automorphism whose order divides
    its own; the partial map on the subgroup generated so far is extended
    breadth-first and abandoned at the first inconsistency.
    """
    if A.order > AUT_GROUP_ORDER_LIMIT:
        raise BudgetError(f"|A| = {A.order} exceeds the automorphism limit {AUT_GROUP_ORDER_LIMIT}")
    if A.order * B.order > ORDER_BUDGET:
        raise BudgetError("product order exceeds budget")
    auts, aut_orders = _automorphisms_cached(A)
    bgens = list(greedy_generators(B, B.full_mask))
    cands = [np.flatnonzero(int(B.element_orders[g]) % aut_orders == 0) for g in bgens]
    cols = B.columns
    ident = np.arange(A.order)
    out: list[SemidirectAction] = []
    nodes = 0

    def extend(psi: dict[int, np.ndarray], gens: list[int], imgs: list[np.ndarray]) -> dict | None:
        psi = dict(psi)
        frontier = list(psi)
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, imgs):
                    y = cols[g][x]
                    val = img[psi[x]]  # psi(x) then img
                    if y in psi:
                        if not np.array_equal(psi[y], val):
                            return None
                    else:
                        psi[y] = val
                        nxt.append(y)
            frontier = nxt
        return psi

    def rec(depth: int, psi: dict[int, np.ndarray], imgs: list[np.ndarray]) -> None:
        nonlocal nodes
        if depth == len(bgens):
            out.append(SemidirectAction(tuple(tuple(psi[b].tolist()) for b in range(B.order))))
            return
        for c in cands[depth].tolist():
            nodes += 1
            if nodes > node_budget:
                raise BudgetError("too many candidate actions")
            trial = imgs + [auts[c]]
            nxt = extend(psi, bgens[: depth + 1], trial)
            if nxt is not None:
                rec(depth + 1, nxt, trial)

    rec(0, {0: ident}, [])
    return out


def _automorphisms_cached(A: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    cache = A.__dict__.setdefault("_fp_cache", {})
    if "auts" not in cache:
        auts = np.array(automorphisms(A), dtype=np.int64).reshape(-1, A.order)
        cache["auts"] = (auts, _aut_orders(auts))
    return cache["auts"]


def semidirect_product(A: FiniteGroup, B: FiniteGroup, action: SemidirectAction, name: str | None = None) -> FiniteGroup:
    """``A`` normal, ``(a1, b1)(a2, b2) = ((a1 . b2) a2, b1 b2)``."""
    na, nb = A.order, B.order
    psi = np.array(action.images, dtype=np.int64)  # psi[b, a]
    a1, b1, a2, b2 = np.meshgrid(np.arange(na), np.arange(nb), np.arange(na), np.arange(nb), indexing="ij")
    prod_a = A.table[psi[b2, a1], a2]
    prod_b = B.table[b1, b2]
    T = (prod_a * nb + prod_b).reshape(na * nb, na * nb)
    gens = [a * nb for a in A.generator_indices] + list(B.generator_indices)
    return _regular(T, gens, name or "semidirect")


def _conjugate_actions(action: SemidirectAction, auts: np.ndarray, auts_inv: np.ndarray, bgens: list[int]) -> np.ndarray:
    """Generator images of every ``Aut(A)``-conjugate of ``action``, one row each."""
    rows = []
    for g in bgens:
        img = np.asarray(action.images[g])
        # gamma^-1 img gamma, applied left first
        rows.append(np.take_along_axis(auts, img[auts_inv], axis=1))
    return np.concatenate(rows, axis=1).astype(np.uint8)


# -- corpus -------------------------------------------------------------------------

class CorpusMember(NamedTuple):
    recipe: GroupRecipe
    group: FiniteGroup

    @property
    def name(self) -> str:
        return self.recipe.label


@dataclass
class Corpus:
    groups: list[CorpusMember]
    max_order: int
    dedup: bool = True
    notices: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    def by_name(self, name: str) -> FiniteGroup:
        for m in self.groups:
            if m.name == name:
                return m.group
        raise KeyError(name)

    def counts_by_order(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self.groups:
            out[m.group.order] = out.get(m.group.order, 0) + 1
        return dict(sorted(out.items()))


def _iso_key(G: FiniteGroup) -> tuple:
    return _plain_fingerprint(G), tuple(sorted(_element_invariants(G)))


class _Deduper:
    def __init__(self):
        self.buckets: dict[tuple, list[CorpusMember]] = {}
        self.members: list[CorpusMember] = []
        self.notices: list[str] = []

    def add(self, recipe: GroupRecipe, G: FiniteGroup | None = None) -> bool:
        if G is None:
            G = materialize(recipe)
        key = _iso_key(G)
        bucket = self.buckets.setdefault(key, [])
        for other in bucket:
            try:
                if isomorphic(G, other.group):
                    return False
            except BudgetError:
                msg = f"isomorphism budget exceeded: {recipe.label} vs {other.name}; kept both"
                log.info(msg)
                self.notices.append(msg)
        member = CorpusMember(recipe, G)
        bucket.append(member)
        self.members.append(member)
        return True


def base_recipes(max_order: int) -> list[GroupRecipe]:
    out: list[GroupRecipe] = []
    for r in (Q8, SL23):
        if r.order <= max_order:
            out.append(r)
    for n in (3, 4, 5):
        if math.factorial(n) <= max_order:
            out.append(symmetric(n))
    for n in (4, 5):
        if math.factorial(n) // 2 <= max_order:
            out.append(alternating(n))
    for n in range(1, max_order + 1):
        out.append(cyclic(n))
    for n in range(3, max_order // 2 + 1):
        out.append(dihedral(n))
    for m in range(8, max_order + 1, 4):
        out.append(dicyclic(m))
    for p in range(2, max_order + 1):
        if len([q for q in range(2, p) if p % q == 0]) == 0:
            k = 2
            while p ** k <= max_order:
                out.append(elementary_abelian(p, k))
                k += 1
    return out


def build_corpus(max_order: int, rounds: int = 2) -> Corpus:
    """Base families closed under direct and semidirect products.

    Each round forms ``A x B`` and every nontrivial ``A : B`` (actions taken
    up to conjugacy in ``Aut(A)``) for members whose orders multiply to at
    most ``max_order``; members are kept one per isomorphism class.
    """
    if max_order > ORDER_BUDGET:
        raise BudgetError(f"max_order {max_order} exceeds {ORDER_BUDGET}")
    dd = _Deduper()
    for r in base_recipes(max_order):
        dd.add(r)
    for _ in range(rounds):
        current = sorted(dd.members, key=lambda m: m.group.order)
        added = False
        for i, ma in enumerate(current):
            A = ma.group
            if A.order < 2:
                continue
            for j, mb in enumerate(current):
                B = mb.group
                if B.order < 2 or A.order * B.order > max_order:
                    continue
                if j >= i:
                    added |= dd.add(direct_product(ma.recipe, mb.recipe))
                added |= _add_semidirects(dd, ma, mb)
        if not added:
            break
    members = sorted(dd.members, key=lambda m: m.group.order)
    return Corpus(members, max_order, True, dd.notices)


def _add_semidirects(dd: _Deduper, ma: CorpusMember, mb: CorpusMember) -> bool:
    A, B = ma.group, mb.group
    try:
        actions = enumerate_semidirect_actions(A, B)
    except BudgetError as exc:
        msg = f"skipped {ma.name} : {mb.name}: {exc}"
        if msg not in dd.notices:  # later rounds retry the same pair
            log.info(msg)
            dd.notices.append(msg)
        return False
    auts = _automorphisms_cached(A)[0]
    auts_inv = np.argsort(auts, axis=1)
    bgens = list(greedy_generators(B, B.full_mask))
    seen = set()
    added = False
    for idx, act in enumerate(actions):
        if act.is_trivial:
            continue
        key = np.concatenate([np.asarray(act.images[g]) for g in bgens]).astype(np.uint8).tobytes()
        if key in seen:
            continue
        seen.update(row.tobytes() for row in _conjugate_actions(act, auts, auts_inv, bgens))
        recipe = semidirect(ma.recipe, mb.recipe, idx)
        G = semidirect_product(A, B, act, name=recipe.label)
        added |= dd.add(recipe, G)
    return added


# -- recipe labels ---------------------------------------------------------------------

_ATOMS = [
    (re.compile(r"C(\d+)\^(\d+)$"), lambda m: elementary_abelian(int(m[1]), int(m[2]))),
    (re.compile(r"Dic(\d+)$"), lambda m: dicyclic(int(m[1]))),
    (re.compile(r"C(\d+)$"), lambda m: cyclic(int(m[1]))),
    (re.compile(r"D(\d+)$"), lambda m: dihedral(int(m[1]))),
    (re.compile(r"S(\d+)$"), lambda m: symmetric(int(m[1]))),
    (re.compile(r"A(\d+)$"), lambda m: alternating(int(m[1]))),
    (re.compile(r"Q8$"), lambda m: Q8),
    (re.compile(r"SL\(2,\s*3\)$"), lambda m: SL23),
    (re.compile(r"(cyclic|dihedral|dicyclic|symmetric|alternating)\((\d+)\)$"),
     lambda m: GroupRecipe(m[1], (int(m[2]),))),
    (re.compile(r"elementary_abelian\((\d+),\s*(\d+)\)$"), lambda m: elementary_abelian(int(m[1]), int(m[2]))),
]


def parse_recipe(text: str) -> GroupRecipe:
    """Inverse of ``GroupRecipe.label``."""
    text = text.strip()
    if text.startswith("("):
        depth = 0
        for i, ch in enumerate(text):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                break
        inner, rest = text[1:i], text[i + 1:]
        depth = 0
        for j, ch in enumerate(inner):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and inner[j:j + 3] in (" x ", " : "):
                a, b = parse_recipe(inner[:j]), parse_recipe(inner[j + 3:])
                if inner[j:j + 3] == " x ":
                    if rest:
                        break
                    return direct_product(a, b)
                m = re.fullmatch(r"#(\d+)", rest)
                if not m:
                    break
                return semidirect(a, b, int(m[1]))
        if not rest and depth == 0 and "x" not in inner and ":" not in inner:
            return parse_recipe(inner)
        raise ValueError(f"cannot parse recipe {text!r}")
    for pat, make in _ATOMS:
        m = pat.match(text)
        if m:
            return make(m)
    raise ValueError(f"cannot parse recipe {text!r}")


# -- file format ------------------------------------------------------------------------

def group_record(G: FiniteGroup, name: str | None = None) -> dict:
    return {
        "name": name or G.name or "G",
        "degree": G.degree,
        "generators": [list(g.images) for g in G.generators],
    }


def group_from_record(rec: dict) -> FiniteGroup:
    try:
        name = str(rec["name"])
        degree = int(rec["degree"])
        gens = [Permutation(g) for g in rec["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed group record: {exc}") from exc
    if any(g.degree != degree for g in gens):
        raise ValueError("generator degree does not match record degree")
    return FiniteGroup(degree, gens, name=name)


def write_group(G: FiniteGroup, path: str | Path, name: str | None = None) -> None:
    Path(path).write_text(json.dumps(group_record(G, name)) + "\n")


def read_group(path: str | Path) -> FiniteGroup:
    try:
        rec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not a group record: {exc}") from exc
    return group_from_record(rec)


def corpus_manifest(corpus: Corpus) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "max_order": corpus.max_order,
        "groups": [dict(group_record(m.group, m.name), recipe=m.recipe.label) for m in corpus],
    }


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(json.dumps(corpus_manifest(corpus), indent=1) + "\n")


def read_corpus(path: str | Path) -> Corpus:
    data = json.loads(Path(path).read_text())
    members = []
    for rec in data["groups"]:
        G = group_from_record(rec)
        try:
            recipe = parse_recipe(rec.get("recipe", rec["name"]))
        except ValueError:
            recipe = GroupRecipe("explicit", name=rec["name"])
        members.append(CorpusMember(recipe, G))
    return Corpus(members, int(data.get("max_order", max((m.group.order for m in members), default=1))))
