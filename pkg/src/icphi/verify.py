"""The ICPhi predicate and one verifier per statement.

A subgroup ``H`` of ``X`` is ICPhi in ``X`` when ``H & [H, X] <= Phi(H)``.
Each verifier evaluates a hypothesis exactly and, where it holds, checks the
conclusion; statements quantified over subgroups are checked at every
instance and a single failing instance is reported as the witness.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .classify import (
    _has_quaternion_presentation,
    _is_abelian_index,
    _is_cyclic_index,
    _is_elementary_abelian_index,
    _is_minimal_non_nilpotent_index,
    _is_p_nilpotent_index,
    _is_q8_index,
    _is_supersolvable_index,
    _q8_free_index,
    automorphism_group,
    isomorphic,
)
from .lattice import SubgroupLattice, _lat
from .perm import BudgetError, FiniteGroup, SubgroupRef, centralizer, is_prime_power, omega, p_part, prime_factors
from .series import (
    _center_index,
    _gen_fitting_index,
    _is_nilpotent_index,
    _is_solvable_index,
    _u_hypercenter_index,
    hypercenter,
    quotient_is_supersolvable,
)


class StatementId(str, enum.Enum):
    T11 = "T11"
    T12 = "T12"
    T13 = "T13"
    T14 = "T14"
    T15 = "T15"
    T16 = "T16"
    T17 = "T17"
    T18 = "T18"
    T19 = "T19"
    L01 = "L01"
    L02 = "L02"
    L03 = "L03"
    L04 = "L04"
    L05 = "L05"
    L06 = "L06"
    L07 = "L07"
    L08 = "L08"
    L09 = "L09"
    L10 = "L10"
    L11 = "L11"
    L12 = "L12"
    L13 = "L13"
    L14 = "L14"
    L15 = "L15"
    L16 = "L16"
    L17 = "L17"
    L18 = "L18"


STATEMENT_TITLES = {
    StatementId.T11: "order-|D| subgroups of a Sylow p-subgroup ICPhi => p-nilpotent",
    StatementId.T12: "Q8-free, order-2 subgroups ICPhi => 2-nilpotent",
    StatementId.T13: "G/E supersolvable, maximal subgroups of Sylows of E ICPhi => supersolvable",
    StatementId.T14: "G/E supersolvable, Sylows of E cyclic or order-|D| ICPhi => supersolvable",
    StatementId.T15: "as T14 with Sylows of F*(E) => supersolvable",
    StatementId.T16: "abelian <=> Q8-free and all subgroups ICPhi <=> Q8-free and primary subgroups ICPhi",
    StatementId.T17: "maximal subgroups ICPhi => nilpotent",
    StatementId.T18: "nontrivial 2-maximal exists, 2-maximal subgroups ICPhi => nilpotent",
    StatementId.T19: "nontrivial 3-maximal exists, 3-maximal subgroups ICPhi => nilpotent or SL(2,3)",
    StatementId.L01: "ICPhi passes to overgroups, to quotients over N <= H, and to HN/N for p-group H, p'-group N",
    StatementId.L02: "proper nontrivial ICPhi subgroup => not simple",
    StatementId.L03: "ICPhi subgroup containing G' => nilpotent",
    StatementId.L04: "minimal non-nilpotent => structure p^a q^b, P/Phi(P) chief, P abelian => elementary",
    StatementId.L05: "Q8-free minimal non-2-nilpotent => elementary abelian Sylow 2",
    StatementId.L06: "N(H)/C(H) a p-group for nontrivial p-subgroups H => p-nilpotent",
    StatementId.L07: "cyclic Sylow for the smallest prime p => p-nilpotent",
    StatementId.L08: "normal p-subgroup P with G/C(P) a p-group => P <= Z_inf(G)",
    StatementId.L09: "G/E supersolvable and E <= Z_U(G) => supersolvable",
    StatementId.L10: "F*(E) <= Z_U(G) => E <= Z_U(G)",
    StatementId.L11: "p-group with a unique order-p subgroup => cyclic or generalized quaternion",
    StatementId.L12: "1 is the only 2-maximal subgroup => |G| = pq",
    StatementId.L13: "1 is the only 3-maximal subgroup => |G| = pqr",
    StatementId.L14: "solvable => maximal subgroups have prime-power index",
    StatementId.L15: "Aut(Q8) isomorphic to S4",
    StatementId.L16: "order 24, 2-closed, Sylow 2 = Q8 => Q8 x C3 or SL(2,3)",
    StatementId.L17: "normal p-subgroup with order-|D| subgroups ICPhi => P <= Z_inf(G)",
    StatementId.L18: "p-group, all subgroups ICPhi in P, Q8-free if p = 2 => abelian",
}


class Hypothesis(str, enum.Enum):
    SATISFIED = "satisfied"
    VACUOUS = "vacuous"
    NOT_SATISFIED = "not-satisfied"


class Conclusion(str, enum.Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    NOT_EVALUATED = "not-evaluated"


@dataclass(frozen=True)
class VerificationVerdict:
    group_id: str
    statement: StatementId
    hypothesis: Hypothesis
    conclusion: Conclusion
    witness: str | None = None

    def __post_init__(self):
        if self.conclusion is not Conclusion.NOT_EVALUATED:
            assert self.hypothesis is Hypothesis.SATISFIED, "only a satisfied hypothesis is evaluated"

    @property
    def violated(self) -> bool:
        return self.conclusion is Conclusion.VIOLATED

    def to_dict(self) -> dict:
        d = asdict(self)
        d["statement"] = self.statement.value
        d["hypothesis"] = self.hypothesis.value
        d["conclusion"] = self.conclusion.value
        return d


# -- the predicate ---------------------------------------------------------------

def _icphi_index(L: SubgroupLattice, h: int, x: int) -> bool:
    inter = L.masks[h] & L.masks[L.bracket(h, x)]
    return inter & ~L.masks[L.frattini_of(h)] == 0


def _icphi_flags(L: SubgroupLattice) -> np.ndarray:
    """ICPhi-in-G flag for every subgroup of the lattice."""
    if "icphi" not in L._cache:
        top = L.top
        L._cache["icphi"] = np.array([_icphi_index(L, h, top) for h in range(len(L))], dtype=bool)
    return L._cache["icphi"]


def is_icphi_subgroup(H: SubgroupRef, X: FiniteGroup | SubgroupRef) -> bool:
    L, x = _lat(X)
    h = L.index(H)
    if not L.contains[x, h]:
        raise ValueError("H is not a subgroup of X")
    return _icphi_index(L, h, x)


def _frattini_over(L: SubgroupLattice, h: int, n: int) -> int:
    """Preimage of ``Phi(H/N)``: the meet of the maximal subgroups of ``H`` above ``N``."""
    m = L.masks[h]
    nmask = L.masks[n]
    for c in L.covers[h]:
        cm = L.masks[c]
        if nmask & ~cm == 0:
            m &= cm
    return m


def _icphi_mod_index(L: SubgroupLattice, h: int, n: int) -> bool:
    """``H/N`` ICPhi in ``G/N``, read off the lattice of ``G`` (``N`` normal, ``N <= H``)."""
    hn = L.join(L.bracket(h, L.top), n)  # [H/N, G/N] = [H, G]N / N
    return L.masks[h] & L.masks[hn] & ~_frattini_over(L, h, n) == 0


def is_icphi_in_quotient(H: SubgroupRef, N: SubgroupRef) -> bool:
    """``HN/N`` ICPhi in ``G/N`` for ``N`` normal in the parent group ``G``."""
    L = H.parent.lattice
    n = L.index(N)
    if not L.normal_flags[n]:
        raise ValueError("N is not normal")
    return _icphi_mod_index(L, L.join(L.index(H), n), n)


# -- helpers ----------------------------------------------------------------------

def _desc(L: SubgroupLattice, i: int) -> str:
    return f"#{i} {L.subgroups[i].describe()}"


def _qualifying_orders(L: SubgroupLattice, P: int, p: int, flags: np.ndarray, caveat: str) -> list[int]:
    """Orders ``d = |D|`` with ``1 < d <= |P|`` such that every order-``d`` subgroup of ``P`` is ICPhi.

    ``caveat`` selects the extra cyclic-order-4 requirement: ``"size"`` when
    ``d = 2`` and ``|P| >= 8``; ``"q8"`` when ``p = 2``, ``d = 2`` and ``P`` is
    not Q8-free.
    """
    out = []
    d = p
    size = int(L.orders[P])
    while d <= size:
        if all(flags[i] for i in L.of_order(d, within=P)):
            extra = False
            if d == 2:
                extra = size >= 8 if caveat == "size" else not _q8_free_index(L, P)
            if not extra or all(flags[c] for c in L.of_order(4, within=P) if _is_cyclic_index(L, c)):
                out.append(d)
        d *= p
    return out


def _nmax(L: SubgroupLattice, n: int) -> list[int]:
    key = ("nmax", n)
    if key not in L._cache:
        L._cache[key] = L.n_maximal_of(L.top, n)
    return L._cache[key]


def _class_reps(L: SubgroupLattice) -> list[int]:
    return [c[0] for c in L.conjugacy_classes]


def _is_p_subgroup(L: SubgroupLattice, i: int) -> int | None:
    n = int(L.orders[i])
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def _supersolvable_quotients(L: SubgroupLattice) -> list[int]:
    return [e for e in L.normal_in(L.top) if quotient_is_supersolvable(L, L.top, e)]


@lru_cache(maxsize=None)
def _reference_groups() -> tuple[FiniteGroup, FiniteGroup, FiniteGroup]:
    from .corpus import Q8, SL23, cyclic, direct_product, materialize, symmetric

    return (materialize(direct_product(Q8, cyclic(3))), materialize(SL23), materialize(symmetric(4)))


class _Result:
    """Accumulates instances of a quantified statement.

    Witnesses are passed as zero-argument callables and only formatted when
    reported.
    """

    def __init__(self):
        self.instances = 0
        self.witness = None
        self.violation = None

    def check(self, ok: bool, what, count: int = 1) -> None:
        if count <= 0:
            return
        self.instances += count
        self.witness = what
        if not ok and self.violation is None:
            self.violation = what

    def verdict(self, gid: str, s: StatementId, none: Hypothesis = Hypothesis.NOT_SATISFIED,
                why_not: str | None = None) -> VerificationVerdict:
        if self.instances == 0:
            return VerificationVerdict(gid, s, none, Conclusion.NOT_EVALUATED, why_not)
        if self.violation is not None:
            return VerificationVerdict(gid, s, Hypothesis.SATISFIED, Conclusion.VIOLATED, _text(self.violation))
        return VerificationVerdict(gid, s, Hypothesis.SATISFIED, Conclusion.VERIFIED,
                                   f"{self.instances} instance(s), last {_text(self.witness)}")


def _text(w) -> str:
    return w() if callable(w) else w


def _single(gid: str, s: StatementId, hyp: bool, ok, witness: str | None) -> VerificationVerdict:
    if not hyp:
        return VerificationVerdict(gid, s, Hypothesis.NOT_SATISFIED, Conclusion.NOT_EVALUATED, witness)
    ok = ok() if callable(ok) else ok
    return VerificationVerdict(gid, s, Hypothesis.SATISFIED,
                               Conclusion.VERIFIED if ok else Conclusion.VIOLATED, witness)


# -- verifiers ------------------------------------------------------------------------

def _v_t11(L, gid):
    F = _icphi_flags(L)
    r = _Result()
    t = L.top
    for p in prime_factors(int(L.orders[t])):
        P = L.sylow_of(t, p)
        ds = _qualifying_orders(L, P, p, F, "size")
        if ds:
            r.check(_is_p_nilpotent_index(L, t, p), lambda p=p, ds=ds: f"p={p} |D|={ds[0]}")
    none = Hypothesis.VACUOUS if L.orders[t] == 1 else Hypothesis.NOT_SATISFIED
    return r.verdict(gid, StatementId.T11, none, "no prime p admits a qualifying |D|")


def _v_t12(L, gid):
    F = _icphi_flags(L)
    t = L.top
    if not _q8_free_index(L, t):
        return _single(gid, StatementId.T12, False, None, "not Q8-free")
    bad = [i for i in L.of_order(2) if not F[i]]
    if bad:
        return _single(gid, StatementId.T12, False, None, f"order-2 subgroup not ICPhi: {_desc(L, bad[0])}")
    return _single(gid, StatementId.T12, True, lambda: _is_p_nilpotent_index(L, t, 2),
                   f"{len(L.of_order(2))} order-2 subgroups, all ICPhi")


def _v_t13(L, gid):
    F = _icphi_flags(L)
    t = L.top
    r = _Result()
    for e in _supersolvable_quotients(L):
        ok = True
        n = int(L.orders[e])
        for p in prime_factors(n):
            for P in L.of_order(p_part(n, p), within=e):
                if not all(F[m] for m in L.covers[P]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            r.check(_is_supersolvable_index(L, t), lambda e=e: f"E={_desc(L, e)}")
    return r.verdict(gid, StatementId.T13)


def _t14_condition(L, F, sub: int) -> str | None:
    """The per-prime condition on Sylow subgroups of ``sub``; a witness string or None."""
    n = int(L.orders[sub])
    parts = []
    for p in prime_factors(n):
        P = L.sylow_of(sub, p)
        if _is_cyclic_index(L, P):
            parts.append(f"{p}:cyclic")
            continue
        ds = _qualifying_orders(L, P, p, F, "q8")
        if not ds:
            return None
        parts.append(f"{p}:|D|={ds[0]}")
    return " ".join(parts)


def _v_t14(L, gid, fitting_star: bool = False):
    F = _icphi_flags(L)
    t = L.top
    s = StatementId.T15 if fitting_star else StatementId.T14
    r = _Result()
    for e in _supersolvable_quotients(L):
        if e == 0:
            continue
        sub = _gen_fitting_index(L, e) if fitting_star else e
        w = _t14_condition(L, F, sub)
        if w is not None:
            r.check(_is_supersolvable_index(L, t), lambda e=e, w=w: f"E={_desc(L, e)} {w}")
    return r.verdict(gid, s)


def _v_t16(L, gid):
    F = _icphi_flags(L)
    t = L.top
    free = _q8_free_index(L, t)
    c1 = _is_abelian_index(L, t)
    c2 = free and bool(F.all())
    primary = [i for i in range(len(L)) if is_prime_power(int(L.orders[i])) or L.orders[i] == 1]
    c3 = free and bool(F[primary].all())
    w = f"(1)={c1} (2)={c2} (3)={c3}"
    # an equivalence: every group is an instance, including all-false rows
    return _single(gid, StatementId.T16, True, c1 == c2 == c3, w)


def _v_t17(L, gid):
    F = _icphi_flags(L)
    t = L.top
    maxes = L.covers[t].tolist()
    if not maxes:
        return VerificationVerdict(gid, StatementId.T17, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED,
                                   "no maximal subgroups")
    bad = [m for m in maxes if not F[m]]
    w = f"maximal not ICPhi: {_desc(L, bad[0])}" if bad else f"{len(maxes)} maximal subgroups, all ICPhi"
    return _single(gid, StatementId.T17, not bad, lambda: _is_nilpotent_index(L, t), w)


def _v_nmax(L, gid, n: int):
    F = _icphi_flags(L)
    t = L.top
    s = StatementId.T18 if n == 2 else StatementId.T19
    subs = _nmax(L, n)
    if not any(L.orders[i] > 1 for i in subs):
        return VerificationVerdict(gid, s, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED,
                                   f"no nontrivial {n}-maximal subgroup")
    bad = [i for i in subs if not F[i]]
    if bad:
        return _single(gid, s, False, None, f"{n}-maximal not ICPhi: {_desc(L, bad[0])}")
    w = f"{len(subs)} {n}-maximal subgroups, all ICPhi"

    def concl():
        if _is_nilpotent_index(L, t):
            return True
        return n == 3 and isomorphic(L.group, _reference_groups()[1])

    if n == 3 and not _is_nilpotent_index(L, t):
        w += "; non-nilpotent"
    return _single(gid, s, True, concl, w)


def _v_l01(L, gid):
    F = _icphi_flags(L)
    t = L.top
    normals = L.normal_in(t)
    r = _Result()
    for h in np.flatnonzero(F).tolist():
        # (1) H is ICPhi in every K between H and G
        ks = np.flatnonzero(L.contains[:, h])
        # K inside C(H) gives [H, K] = 1
        central = ~(L.membership[ks] & ~L.centralizer_flags(h)).any(axis=1)
        if central.any():
            k0 = int(ks[central][-1])
            r.check(True, lambda h=h, k=k0: f"(1) H={_desc(L, h)} K={_desc(L, k)}", count=int(central.sum()))
        for k in ks[~central].tolist():
            r.check(_icphi_index(L, h, k), lambda h=h, k=k: f"(1) H={_desc(L, h)} K={_desc(L, k)}")
        # (2) H/N ICPhi in G/N for normal N <= H
        for n in normals:
            if L.contains[h, n]:
                r.check(_icphi_mod_index(L, h, n), lambda h=h, n=n: f"(2) H={_desc(L, h)} N={_desc(L, n)}")
        # (3) HN/N ICPhi in G/N for p-group H and normal p'-group N
        p = _is_p_subgroup(L, h)
        if p is not None:
            for n in normals:
                if L.orders[n] % p:
                    r.check(_icphi_mod_index(L, L.join(h, n), n), lambda h=h, n=n: f"(3) H={_desc(L, h)} N={_desc(L, n)}")
    return r.verdict(gid, StatementId.L01)


def _v_l02(L, gid):
    F = _icphi_flags(L)
    t = L.top
    cands = [i for i in range(1, t) if F[i]]
    if not cands:
        return _single(gid, StatementId.L02, False, None, "no proper nontrivial ICPhi subgroup")
    simple = len(L.normal_in(t)) == 2
    return _single(gid, StatementId.L02, True, not simple, f"H={_desc(L, cands[0])}")


def _v_l03(L, gid):
    F = _icphi_flags(L)
    t = L.top
    d = L.derived_of(t)
    r = _Result()
    for h in np.flatnonzero(F & L.contains[:, d]).tolist():
        r.check(_is_nilpotent_index(L, t), lambda h=h: f"H={_desc(L, h)}")
    return r.verdict(gid, StatementId.L03)


def _v_l04(L, gid):
    t = L.top
    if not _is_minimal_non_nilpotent_index(L, t):
        return _single(gid, StatementId.L04, False, None, "not minimal non-nilpotent")
    n = int(L.orders[t])
    ps = prime_factors(n)
    if len(ps) != 2:
        return _single(gid, StatementId.L04, True, False, f"|G| = {n} has {len(ps)} prime divisors")
    for p, q in (ps, ps[::-1]):
        P = L.sylow_of(t, p)
        Q = L.sylow_of(t, q)
        if L.normal_flags[P] and _is_cyclic_index(L, Q):
            break
    else:
        return _single(gid, StatementId.L04, True, False, "no normal Sylow p with cyclic Sylow q")
    phi = L.frattini_of(P)
    between = [i for i in L.normal_in(t) if i not in (P, phi) and L.contains[P, i] and L.contains[i, phi]]
    chief = not between
    elem = (not _is_abelian_index(L, P)) or _is_elementary_abelian_index(L, P)
    w = f"p={p} q={q} P/Phi(P) chief={chief} P abelian=>elementary={elem}"
    return _single(gid, StatementId.L04, True, chief and elem, w)


def _v_l05(L, gid):
    t = L.top
    if _is_p_nilpotent_index(L, t, 2):
        return _single(gid, StatementId.L05, False, None, "2-nilpotent")
    bad = [m for m in L.covers[t].tolist() if not _is_p_nilpotent_index(L, m, 2)]
    if bad:
        return _single(gid, StatementId.L05, False, None, f"proper subgroup not 2-nilpotent: {_desc(L, bad[0])}")
    if not _q8_free_index(L, t):
        return _single(gid, StatementId.L05, False, None, "not Q8-free")
    P = L.sylow_of(t, 2)
    return _single(gid, StatementId.L05, True, _is_elementary_abelian_index(L, P), f"Sylow 2 {_desc(L, P)}")


def _centralizer_order(L, i: int) -> int:
    key = ("Cord", i)
    if key not in L._cache:
        L._cache[key] = centralizer(L.group, L.subgroups[i]).order
    return L._cache[key]


def _v_l06(L, gid):
    t = L.top
    reps = _class_reps(L)
    r = _Result()
    for p in prime_factors(int(L.orders[t])):
        ok = True
        for i in reps:
            if i == 0 or _is_p_subgroup(L, i) != p:
                continue
            ratio = L.normalizer_mask(i).bit_count() // _centralizer_order(L, i)
            if p_part(ratio, p) != ratio:
                ok = False
                break
        if ok:
            r.check(_is_p_nilpotent_index(L, t, p), lambda p=p: f"p={p}")
    return r.verdict(gid, StatementId.L06)


def _v_l07(L, gid):
    t = L.top
    n = int(L.orders[t])
    if n == 1:
        return VerificationVerdict(gid, StatementId.L07, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED, "trivial group")
    p = prime_factors(n)[0]
    P = L.sylow_of(t, p)
    return _single(gid, StatementId.L07, _is_cyclic_index(L, P), lambda: _is_p_nilpotent_index(L, t, p),
                   f"p={p} Sylow {_desc(L, P)}")


def _v_l08(L, gid):
    t = L.top
    z = L.index(hypercenter(L.group))
    n = int(L.orders[t])
    r = _Result()
    for P in L.normal_in(t):
        p = _is_p_subgroup(L, P)
        if p is None:
            continue
        quo = n // _centralizer_order(L, P)
        if p_part(quo, p) == quo:
            r.check(bool(L.contains[z, P]), lambda P=P: f"P={_desc(L, P)}")
    return r.verdict(gid, StatementId.L08)


def _v_l09(L, gid):
    t = L.top
    zu = _u_hypercenter_index(L, t)
    r = _Result()
    for e in _supersolvable_quotients(L):
        if L.contains[zu, e]:
            r.check(_is_supersolvable_index(L, t), lambda e=e: f"E={_desc(L, e)}")
    return r.verdict(gid, StatementId.L09)


def _v_l10(L, gid):
    t = L.top
    zu = _u_hypercenter_index(L, t)
    r = _Result()
    for e in L.normal_in(t):
        fs = _gen_fitting_index(L, e)
        if L.contains[zu, fs]:
            r.check(bool(L.contains[zu, e]), lambda e=e: f"E={_desc(L, e)}")
    return r.verdict(gid, StatementId.L10)


def _v_l11(L, gid):
    r = _Result()
    for i in _class_reps(L):
        p = _is_p_subgroup(L, i)
        if p is None or len(L.of_order(p, within=i)) != 1:
            continue
        ok = _is_cyclic_index(L, i) or (p == 2 and _has_quaternion_presentation(L, i))
        r.check(ok, lambda i=i: f"P={_desc(L, i)}")
    return r.verdict(gid, StatementId.L11)


def _v_l12_13(L, gid, n: int):
    t = L.top
    s = StatementId.L12 if n == 2 else StatementId.L13
    subs = _nmax(L, n)
    if not subs:
        return VerificationVerdict(gid, s, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED, f"no {n}-maximal subgroups")
    if subs != [0]:
        return _single(gid, s, False, None, f"nontrivial {n}-maximal: {_desc(L, max(subs))}")
    order = int(L.orders[t])
    return _single(gid, s, True, omega(order) == n, f"|G| = {order}")


def _v_l14(L, gid):
    t = L.top
    if not _is_solvable_index(L, t):
        return _single(gid, StatementId.L14, False, None, "not solvable")
    maxes = L.covers[t].tolist()
    if not maxes:
        return VerificationVerdict(gid, StatementId.L14, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED,
                                   "no maximal subgroups")
    n = int(L.orders[t])
    bad = [m for m in maxes if not is_prime_power(n // int(L.orders[m]))]
    w = f"index {n // int(L.orders[bad[0]])}: {_desc(L, bad[0])}" if bad else f"{len(maxes)} maximal subgroups"
    return _single(gid, StatementId.L14, True, not bad, w)


def _v_l15(L, gid):
    t = L.top
    if not _is_q8_index(L, t):
        return _single(gid, StatementId.L15, False, None, "G is not Q8")
    A = automorphism_group(L.group)
    return _single(gid, StatementId.L15, True, lambda: isomorphic(A, _reference_groups()[2]), f"|Aut(G)| = {A.order}")


def _v_l16(L, gid):
    t = L.top
    if L.orders[t] != 24:
        return _single(gid, StatementId.L16, False, None, "order is not 24")
    P = L.sylow_of(t, 2)
    if not L.normal_flags[P]:
        return _single(gid, StatementId.L16, False, None, "not 2-closed")
    if not _is_q8_index(L, P):
        return _single(gid, StatementId.L16, False, None, "Sylow 2 is not Q8")
    q8c3, sl23, _ = _reference_groups()
    G = L.group
    if isomorphic(G, q8c3):
        return _single(gid, StatementId.L16, True, True, "Q8 x C3")
    return _single(gid, StatementId.L16, True, isomorphic(G, sl23), "SL(2,3)")


def _v_l17(L, gid):
    F = _icphi_flags(L)
    t = L.top
    z = L.index(hypercenter(L.group))
    r = _Result()
    for P in L.normal_in(t):
        p = _is_p_subgroup(L, P)
        if p is None:
            continue
        ds = _qualifying_orders(L, P, p, F, "q8")
        if ds:
            r.check(bool(L.contains[z, P]), lambda P=P, ds=ds: f"P={_desc(L, P)} |D|={ds[0]}")
    return r.verdict(gid, StatementId.L17)


def _v_l18(L, gid):
    t = L.top
    r = _Result()
    for p in prime_factors(int(L.orders[t])):
        P = L.sylow_of(t, p)
        if p == 2 and not _q8_free_index(L, P):
            continue
        if all(_icphi_index(L, h, P) for h in L.subs(P).tolist()):
            r.check(_is_abelian_index(L, P), lambda P=P: f"P={_desc(L, P)}")
    return r.verdict(gid, StatementId.L18)


_VERIFIERS = {
    StatementId.T11: _v_t11,
    StatementId.T12: _v_t12,
    StatementId.T13: _v_t13,
    StatementId.T14: _v_t14,
    StatementId.T15: lambda L, gid: _v_t14(L, gid, fitting_star=True),
    StatementId.T16: _v_t16,
    StatementId.T17: _v_t17,
    StatementId.T18: lambda L, gid: _v_nmax(L, gid, 2),
    StatementId.T19: lambda L, gid: _v_nmax(L, gid, 3),
    StatementId.L01: _v_l01,
    StatementId.L02: _v_l02,
    StatementId.L03: _v_l03,
    StatementId.L04: _v_l04,
    StatementId.L05: _v_l05,
    StatementId.L06: _v_l06,
    StatementId.L07: _v_l07,
    StatementId.L08: _v_l08,
    StatementId.L09: _v_l09,
    StatementId.L10: _v_l10,
    StatementId.L11: _v_l11,
    StatementId.L12: lambda L, gid: _v_l12_13(L, gid, 2),
    StatementId.L13: lambda L, gid: _v_l12_13(L, gid, 3),
    StatementId.L14: _v_l14,
    StatementId.L15: _v_l15,
    StatementId.L16: _v_l16,
    StatementId.L17: _v_l17,
    StatementId.L18: _v_l18,
}


def verify(G: FiniteGroup, s: StatementId | str, group_id: str | None = None) -> VerificationVerdict:
    s = StatementId(s)
    gid = group_id or G.name or "G"
    try:
        return _VERIFIERS[s](G.lattice, gid)
    except BudgetError as exc:
        return VerificationVerdict(gid, s, Hypothesis.NOT_SATISFIED, Conclusion.NOT_EVALUATED, f"budget: {exc}")
