"""Decision procedures for proportionality notions with self-checking witnesses.

Every verifier works on bitmasks: ballots, committees and voter groups are
ints. Group-size thresholds are compared in integers (``|N'|*k >= l*n`` for
the Hare quota, ``|N'|*(k+1) > l*n`` for Droop).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable

from .flowlp import ClosureProblem, RationalLP, lp_feasible, max_closure
from .model import (
    Instance,
    ModelError,
    NotPartyListError,
    candidate_label,
    committee_mask,
    format_candidates,
    format_voters,
    lower_quota_seats,
    mask_of,
    members_of,
    party_list_structure,
)


class NotionId(str, enum.Enum):
    JR = "jr"
    PJR = "pjr"
    EJR = "ejr"
    PJR_PLUS = "pjr+"
    EJR_PLUS = "ejr+"
    CORE = "core"
    FJR = "fjr"
    FPJR = "fpjr"
    SUBCORE = "subcore"
    PRICEABLE = "priceable"
    NPR = "npr"
    LQ_PARTY_LIST = "lq"
    WEAK_EJR_PLUS = "weak-ejr+"
    WEAK_PJR_PLUS = "weak-pjr+"
    DIFF_EJR_PLUS = "diff-ejr+"
    DIFF_PJR_PLUS = "diff-pjr+"
    EQUAL_EJR_PLUS = "equal-ejr+"
    DROOP_EJR_PLUS = "droop-ejr+"
    OVERLAP_PJR = "overlap-pjr"
    EJR_PLUS_EX_PARETO = "ejr+-expareto"
    UNIVERSAL = "universal"
    EMPTY = "empty"

    @classmethod
    def parse(cls, text: "str | NotionId") -> "NotionId":
        if isinstance(text, NotionId):
            return text
        key = str(text).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        alias = key.replace("plus", "+").replace("_", "-")
        for member in cls:
            if alias == member.value:
                return member
        raise ValueError(f"unknown notion id {text!r}")

    def __str__(self) -> str:
        return self.value


# Table columns, in the order the fingerprint grid prints them.
TABLE_NOTIONS = (
    NotionId.JR,
    NotionId.PJR,
    NotionId.EJR,
    NotionId.PJR_PLUS,
    NotionId.EJR_PLUS,
    NotionId.SUBCORE,
    NotionId.FPJR,
    NotionId.FJR,
    NotionId.CORE,
    NotionId.PRICEABLE,
    NotionId.NPR,
)


@dataclass(frozen=True)
class ViolationWitness:
    """Evidence that a committee violates a notion.

    ``ell`` holds the seat demand (beta for FJR/FPJR). ``anchors`` holds the
    unelected candidate for single-candidate notions, the proposed set for
    core-like notions, the party for lower quota, or the dominating committee
    when ``mode == "pareto"``.
    """

    kind: NotionId
    group: frozenset[int]
    ell: int | None = None
    anchors: frozenset[int] = frozenset()
    average: Fraction | None = None
    mode: str = ""

    def describe(self) -> str:
        parts = [f"witness={format_voters(self.group)}"]
        if self.ell is not None:
            parts.append(f"ell={self.ell}")
        if self.mode == "pareto":
            parts.append(f"W'={format_candidates(self.anchors)}")
        elif len(self.anchors) == 1 and self.kind not in _SET_ANCHORED:
            parts.append(f"c={candidate_label(next(iter(self.anchors)))}")
        elif self.anchors:
            parts.append(f"C'={format_candidates(self.anchors)}")
        if self.average is not None:
            parts.append(f"avg={self.average}")
        return ", ".join(parts)

    def to_json(self) -> dict:
        """Voters and candidates numbered from 1, as in :meth:`describe`."""
        out = {
            "notion": self.kind.value,
            "group": [i + 1 for i in sorted(self.group)],
            "ell": self.ell,
            "anchors": [c + 1 for c in sorted(self.anchors)],
        }
        if self.average is not None:
            out["average"] = str(self.average)
        if self.mode:
            out["mode"] = self.mode
        return out


_SET_ANCHORED = {
    NotionId.CORE,
    NotionId.FJR,
    NotionId.FPJR,
    NotionId.SUBCORE,
    NotionId.LQ_PARTY_LIST,
    NotionId.PJR,
    NotionId.EJR,
    NotionId.OVERLAP_PJR,
}


@dataclass(frozen=True)
class PriceSystem:
    budget: Fraction
    payments: dict  # (voter, candidate) -> Fraction, zero entries omitted


@dataclass(frozen=True)
class VerificationResult:
    notion: NotionId
    satisfied: bool
    witness: ViolationWitness | None = None
    price_system: PriceSystem | None = None

    def describe(self) -> str:
        if self.satisfied:
            return "satisfied"
        return "violated; " + self.witness.describe()


# -- per-instance precomputation ----------------------------------------------

MAX_SUBSET_VOTERS = 20


class SubsetBoundError(ModelError):
    """The notion needs voter-subset enumeration and the instance is too large."""



class Profile:
    """Bitmask view of an instance shared by all committees."""

    __slots__ = ("m", "k", "n", "masks", "full_c", "full_n", "supp",
                 "_subsets", "_small_sets", "_ctx")

    def __init__(self, m: int, k: int, masks: tuple[int, ...]):
        self.m, self.k, self.masks = m, k, masks
        self.n = n = len(masks)
        self.full_c = (1 << m) - 1
        self.full_n = (1 << n) - 1
        self.supp = tuple(
            sum(1 << i for i in range(n) if masks[i] >> c & 1) for c in range(m)
        )
        self._subsets = None
        self._small_sets = None
        self._ctx = None

    def _build_subsets(self):
        n, masks = self.n, self.masks
        if n > MAX_SUBSET_VOTERS:
            raise SubsetBoundError(
                f"{n} voters: subset enumeration is limited to {MAX_SUBSET_VOTERS}")
        size = [0] * (1 << n)
        inter = [self.full_c] * (1 << n)
        union = [0] * (1 << n)
        for x in range(1, 1 << n):
            low = x & -x
            i = low.bit_length() - 1
            rest = x ^ low
            size[x] = size[rest] + 1
            inter[x] = inter[rest] & masks[i]
            union[x] = union[rest] | masks[i]
        self._subsets = (size, inter, union)
        return self._subsets

    # per voter subset: size, common approvals, union of approvals
    @property
    def size(self) -> list[int]:
        return (self._subsets or self._build_subsets())[0]

    @property
    def inter(self) -> list[int]:
        return (self._subsets or self._build_subsets())[1]

    @property
    def union(self) -> list[int]:
        return (self._subsets or self._build_subsets())[2]

    @property
    def small_sets(self) -> tuple:
        """All candidate sets T with 1 <= |T| <= k, by size then lexicographic."""
        if self._small_sets is None:
            self._small_sets = tuple(
                (mask_of(t), len(t))
                for r in range(1, self.k + 1)
                for t in combinations(range(self.m), r)
            )
        return self._small_sets

    @classmethod
    def of(cls, inst: Instance) -> "Profile":
        return _profile(inst.m, inst.k, inst.masks)


@lru_cache(maxsize=8192)
def _profile(m: int, k: int, masks: tuple[int, ...]) -> Profile:
    return Profile(m, k, masks)


class Pair:
    """A profile plus one committee; derived quantities are computed lazily."""

    __slots__ = ("p", "w", "util", "_uw")

    def __init__(self, prof: Profile, w: int):
        self.p = prof
        self.w = w
        self.util = tuple((b & w).bit_count() for b in prof.masks)
        self._uw = None

    def uw(self) -> list[int]:
        """``|union of A_i & W|`` for every voter subset."""
        if self._uw is None:
            p, w = self.p, self.w
            union = p.union
            self._uw = [(union[x] & w).bit_count() for x in range(1 << p.n)]
        return self._uw

    def voters_below(self, bound: int) -> int:
        out = 0
        for i, u in enumerate(self.util):
            if u < bound:
                out |= 1 << i
        return out


def _lowest(util, voter_mask: int, count: int) -> int:
    """The ``count`` supporters with the smallest utility (ties by index)."""
    order = sorted(
        (util[i], i) for i in range(len(util)) if voter_mask >> i & 1
    )
    return mask_of(i for _, i in order[:count])


def _submasks_desc(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _wit(kind, group_mask, ell=None, anchors_mask=0, **kw) -> ViolationWitness:
    return ViolationWitness(
        kind, frozenset(members_of(group_mask)), ell,
        frozenset(members_of(anchors_mask)), **kw,
    )


# -- verifiers: each returns a witness or None ----------------------------------


def _jr(q: Pair):
    p = q.p
    unrep = q.voters_below(1)
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        g = p.supp[c] & unrep
        if g.bit_count() * p.k >= p.n:
            return _wit(NotionId.JR, g, 1, 1 << c)
    return None


def _pjr(q: Pair):
    p = q.p
    n, k, w = p.n, p.k, q.w
    for x in range(p.full_n, 0, -1):
        ell = min(p.inter[x].bit_count(), p.size[x] * k // n, k)
        if ell >= 1 and (p.union[x] & w).bit_count() < ell:
            return _wit(NotionId.PJR, x, ell, p.inter[x])
    return None


def _ejr(q: Pair):
    p = q.p
    n, k, util = p.n, p.k, q.util
    for x in range(p.full_n, 0, -1):
        ell = min(p.inter[x].bit_count(), p.size[x] * k // n, k)
        if ell >= 1 and all(util[i] < ell for i in members_of(x)):
            return _wit(NotionId.EJR, x, ell, p.inter[x])
    return None


def _ejr_plus(q: Pair, kind=NotionId.EJR_PLUS, droop=False):
    p = q.p
    n, k, util = p.n, p.k, q.util
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        sc = p.supp[c]
        for ell in range(k, 0, -1):
            below = sc & q.voters_below(ell)
            cnt = below.bit_count()
            if droop:
                if cnt * (k + 1) > ell * n:
                    need = ell * n // (k + 1) + 1
                    return _wit(kind, _lowest(util, below, need), ell, 1 << c)
            elif cnt * k >= ell * n:
                need = _ceil_div(ell * n, k)
                return _wit(kind, _lowest(util, below, need), ell, 1 << c)
    return None


def _pjr_plus_closure(q: Pair, c: int):
    """Max closure at candidate ``c``: voters earn k, winners cost n."""
    p = q.p
    weights = {}
    requires = {}
    for i in members_of(p.supp[c]):
        weights[("v", i)] = p.k
        requires[("v", i)] = frozenset(("w", d) for d in members_of(p.masks[i] & q.w))
    for d in members_of(q.w):
        weights[("w", d)] = -p.n
    return max_closure(ClosureProblem(weights, requires))


def _pjr_plus(q: Pair):
    p = q.p
    n, k = p.n, p.k
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        if p.supp[c].bit_count() * k < n:
            continue
        res = _pjr_plus_closure(q, c)
        if res.value >= n:
            group = mask_of(i for tag, i in res.chosen if tag == "v")
            ell = min(k, group.bit_count() * k // n)
            return _wit(NotionId.PJR_PLUS, group, ell, 1 << c)
    return None


def _core(q: Pair):
    p = q.p
    n, k, util, masks = p.n, p.k, q.util, p.masks
    for t, size in p.small_sets:
        dev = 0
        for i in range(n):
            if (masks[i] & t).bit_count() > util[i]:
                dev |= 1 << i
        if dev.bit_count() * k >= size * n:
            return _wit(NotionId.CORE, dev, size, t)
    return None


def _fjr(q: Pair):
    p = q.p
    n, k, util, masks = p.n, p.k, q.util, p.masks
    for t, size in p.small_sets:
        hits = [(masks[i] & t).bit_count() for i in range(n)]
        for beta in range(1, size + 1):
            g = 0
            for i in range(n):
                if hits[i] >= beta and util[i] < beta:
                    g |= 1 << i
            if g.bit_count() * k >= size * n:
                return _wit(NotionId.FJR, g, beta, t)
    return None


def _fpjr(q: Pair):
    p = q.p
    n, k, masks = p.n, p.k, p.masks
    uw = q.uw()
    for t, size in p.small_sets:
        need = _ceil_div(size * n, k)
        hits = [(masks[i] & t).bit_count() for i in range(n)]
        for beta in range(1, size + 1):
            e = 0
            for i in range(n):
                if hits[i] >= beta:
                    e |= 1 << i
            if e.bit_count() < need:
                break
            for x in _submasks_desc(e):
                if p.size[x] >= need and uw[x] < beta:
                    return _wit(NotionId.FPJR, x, beta, t)
    return None


def _subcore(q: Pair):
    """Equivalent single-shot form: unelected set C' hit by every member."""
    p = q.p
    n, k, masks, w = p.n, p.k, p.masks, q.w
    uw = q.uw()
    losers = members_of(p.full_c & ~w)
    for r in range(1, min(k, len(losers)) + 1):
        for cs in combinations(losers, r):
            cm = mask_of(cs)
            hit = 0
            for i in range(n):
                if masks[i] & cm:
                    hit |= 1 << i
            for x in _submasks_desc(hit):
                ell = min(k, p.size[x] * k // n)
                if ell >= 1 and uw[x] + r <= ell:
                    anchors = cm | (p.union[x] & w)
                    return _wit(NotionId.SUBCORE, x, ell, anchors)
    return None


def _npr(q: Pair):
    p = q.p
    n, k, util = p.n, p.k, q.util
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        order = sorted((util[i], i) for i in members_of(p.supp[c]))
        for ell in range(k, 0, -1):
            s = _ceil_div(ell * n, k)
            if s > len(order):
                continue
            total = sum(u for u, _ in order[:s])
            if total <= (ell - 1) * s:
                group = mask_of(i for _, i in order[:s])
                return _wit(NotionId.NPR, group, ell, 1 << c, average=Fraction(total, s))
    return None


def _lq(q: Pair):
    p = q.p
    inst = Instance.from_masks(p.m, p.k, p.masks)
    structure = party_list_structure(inst)
    if structure is None:
        raise NotPartyListError("lower quota is defined on party-list instances only")
    seats = lower_quota_seats(structure, p.k)
    for party, voters, quota in zip(structure.parties, structure.party_voters, seats):
        if (mask_of(party) & q.w).bit_count() < quota:
            return _wit(NotionId.LQ_PARTY_LIST, mask_of(voters), quota, mask_of(party))
    return None


def _weak_ejr_plus(q: Pair):
    p = q.p
    n, k, util = p.n, p.k, q.util
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        sc = p.supp[c]
        cnt = sc.bit_count()
        top = max((util[i] for i in members_of(sc)), default=0)
        for ell in range(k, 0, -1):
            if cnt and cnt * k >= ell * n and top < ell:
                return _wit(NotionId.WEAK_EJR_PLUS, sc, ell, 1 << c)
    return None


def _weak_pjr_plus(q: Pair):
    p = q.p
    n, k = p.n, p.k
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        sc = p.supp[c]
        if not sc:
            continue
        covered = (p.union[sc] & q.w).bit_count()
        ell = min(k, sc.bit_count() * k // n)
        if ell >= 1 and covered < ell:
            return _wit(NotionId.WEAK_PJR_PLUS, sc, ell, 1 << c)
    return None


def _classes(voter_mask: int, key) -> list[int]:
    groups: dict = {}
    for i in members_of(voter_mask):
        groups[key(i)] = groups.get(key(i), 0) | 1 << i
    return list(groups.values())


def _diff_plus(q: Pair, individual: bool):
    p = q.p
    n, k, util, w = p.n, p.k, q.util, q.w
    kind = NotionId.DIFF_EJR_PLUS if individual else NotionId.DIFF_PJR_PLUS
    uw = None if individual else q.uw()
    for c in range(p.m):
        if w >> c & 1:
            continue
        for cls in _classes(p.supp[c], lambda i: p.masks[i] & ~w):
            if individual:
                for ell in range(k, 0, -1):
                    below = cls & q.voters_below(ell)
                    if below.bit_count() * k >= ell * n:
                        need = _ceil_div(ell * n, k)
                        return _wit(kind, _lowest(util, below, need), ell, 1 << c)
            else:
                for x in _submasks_desc(cls):
                    ell = min(k, p.size[x] * k // n)
                    if ell >= 1 and uw[x] < ell:
                        return _wit(kind, x, ell, 1 << c)
    return None


def _equal_ejr_plus(q: Pair):
    p = q.p
    n, k, util = p.n, p.k, q.util
    for c in range(p.m):
        if q.w >> c & 1:
            continue
        for cls in _classes(p.supp[c], lambda i: util[i]):
            t = util[(cls & -cls).bit_length() - 1]
            ell = min(k, cls.bit_count() * k // n)
            if ell >= 1 and t < ell:
                return _wit(NotionId.EQUAL_EJR_PLUS, cls, ell, 1 << c)
    return None


def _overlap_pjr(q: Pair):
    p = q.p
    n, k, w = p.n, p.k, q.w
    for cls in _classes(p.full_n, lambda i: p.masks[i] & w):
        t = (p.masks[(cls & -cls).bit_length() - 1] & w).bit_count()
        for x in _submasks_desc(cls):
            ell = min(p.inter[x].bit_count(), p.size[x] * k // n, k)
            if ell >= 1 and t < ell:
                return _wit(NotionId.OVERLAP_PJR, x, ell, p.inter[x])
    return None


def _ex_pareto(q: Pair):
    p = q.p
    util, masks = q.util, p.masks
    free = members_of(p.full_c & ~q.w)
    for alt in combinations(free, p.k):
        am = mask_of(alt)
        if all((masks[i] & am).bit_count() > util[i] for i in range(p.n)):
            return _wit(NotionId.EJR_PLUS_EX_PARETO, p.full_n, None, am, mode="pareto")
    return None


def _ejr_plus_ex_pareto(q: Pair):
    wit = _ejr_plus(q, kind=NotionId.EJR_PLUS_EX_PARETO)
    return wit if wit is not None else _ex_pareto(q)


def _priceable(q: Pair):
    if not _is_priceable(q.p, q.w):
        return _wit(NotionId.PRICEABLE, q.p.full_n)
    return None


_VERIFIERS = {
    NotionId.JR: _jr,
    NotionId.PJR: _pjr,
    NotionId.EJR: _ejr,
    NotionId.PJR_PLUS: _pjr_plus,
    NotionId.EJR_PLUS: _ejr_plus,
    NotionId.CORE: _core,
    NotionId.FJR: _fjr,
    NotionId.FPJR: _fpjr,
    NotionId.SUBCORE: _subcore,
    NotionId.PRICEABLE: _priceable,
    NotionId.NPR: _npr,
    NotionId.LQ_PARTY_LIST: _lq,
    NotionId.WEAK_EJR_PLUS: _weak_ejr_plus,
    NotionId.WEAK_PJR_PLUS: _weak_pjr_plus,
    NotionId.DIFF_EJR_PLUS: lambda q: _diff_plus(q, True),
    NotionId.DIFF_PJR_PLUS: lambda q: _diff_plus(q, False),
    NotionId.EQUAL_EJR_PLUS: _equal_ejr_plus,
    NotionId.DROOP_EJR_PLUS: lambda q: _ejr_plus(q, NotionId.DROOP_EJR_PLUS, droop=True),
    NotionId.OVERLAP_PJR: _overlap_pjr,
    NotionId.EJR_PLUS_EX_PARETO: _ejr_plus_ex_pareto,
    NotionId.UNIVERSAL: lambda q: None,
    NotionId.EMPTY: lambda q: _wit(NotionId.EMPTY, q.p.full_n),
}


# -- priceability ----------------------------------------------------------------


def _price_key(prof: Profile, w: int):
    """Relabelled structure that determines priceability of (profile, W).

    Winners are renamed ``0..k-1``, voters are reordered, and only maximal
    loser supports are kept: every leftover term is nonnegative, so a support
    contained in another imposes a weaker constraint. The minimum over all
    winner orders makes isomorphic structures share a key.
    """
    n = prof.n
    winners = members_of(w)
    supports = {prof.supp[c] for c in range(prof.m) if not w >> c & 1 and prof.supp[c]}
    maximal = [s for s in supports if not any(s != t and s & t == s for t in supports)]
    best = None
    for order in permutations(range(len(winners))):
        pos = {c: order[j] for j, c in enumerate(winners)}
        rows = sorted(
            (sum(1 << pos[c] for c in members_of(prof.masks[i] & w)),
             tuple(s >> i & 1 for s in maximal))
            for i in range(n)
        )
        sup = tuple(sorted(
            sum(row[1][t] << i for i, row in enumerate(rows)) for t in range(len(maximal))
        ))
        key = (n, len(winners), tuple(row[0] for row in rows), sup)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def _price_verdict(key) -> bool:
    n, k, wballots, supports = key
    lp = RationalLP()
    budget = lp.var("B", 0)
    pay = {}
    for i, b in enumerate(wballots):
        for j in members_of(b):
            pay[i, j] = lp.var(f"p{i}_{j}", 0, 1)
    for i in range(n):
        row = {pay[i, j]: n for j in members_of(wballots[i])}
        row[budget] = -1
        lp.add(row, "<=", 0)  # n * spend_i <= B
    for j in range(k):
        lp.add({pay[i, j]: 1 for i in range(n) if wballots[i] >> j & 1}, "==", 1)
    for s in supports:
        voters = members_of(s)
        row = {budget: len(voters)}
        for i in voters:
            for j in members_of(wballots[i]):
                row[pay[i, j]] = -n
        lp.add(row, "<=", n)  # |N_c| * B/n - spend <= 1, scaled by n
    return lp_feasible(lp) is not None


def _is_priceable(prof: Profile, w: int) -> bool:
    if any(not prof.supp[c] for c in members_of(w)):
        return False  # an unapproved winner cannot be funded
    return _price_verdict(_price_key(prof, w))


def _price_system(inst: Instance, w: int) -> PriceSystem | None:
    if any(not any(b >> c & 1 for b in inst.masks) for c in members_of(w)):
        return None
    types = sorted(set(inst.masks))
    point = lp_feasible(priceability_lp(inst, members_of(w), by_ballot=True))
    if point is None:
        return None
    payments = {}
    for name, v in point.items():
        if name.startswith("p") and v:
            t, c = name[1:].split("_")
            for i, b in enumerate(inst.masks):
                if b == types[int(t)]:
                    payments[i, int(c)] = v
    return PriceSystem(point["B"], payments)


def priceability_lp(inst: Instance, committee: Iterable[int], by_ballot: bool = False) -> RationalLP:
    """The C1-C5 system; ``p{i}_{c}`` is what voter ``i`` pays for winner ``c``.

    With ``by_ballot`` the voters sharing a ballot share their variables
    (``i`` then indexes the sorted distinct ballots). Any solution can be
    averaged over identical voters, so both systems are equally feasible.
    """
    w = committee_mask(inst, committee)
    n = inst.n
    if by_ballot:
        ballots = sorted(set(inst.masks))
        weight = [inst.masks.count(b) for b in ballots]
    else:
        ballots, weight = list(inst.masks), [1] * n
    lp = RationalLP()
    lp.var("B", 0)
    for i, b in enumerate(ballots):
        for c in members_of(b & w):
            lp.var(f"p{i}_{c}", 0, 1)
    for i, b in enumerate(ballots):
        row = {f"p{i}_{c}": n for c in members_of(b & w)}
        row["B"] = -1
        lp.add(row, "<=", 0)
    for c in members_of(w):
        lp.add({f"p{i}_{c}": weight[i] for i, b in enumerate(ballots) if b >> c & 1}, "==", 1)
    for c in range(inst.m):
        if w >> c & 1:
            continue
        voters = [i for i, b in enumerate(ballots) if b >> c & 1]
        if not voters:
            continue
        row = {"B": sum(weight[i] for i in voters)}
        for i in voters:
            for d in members_of(ballots[i] & w):
                row[f"p{i}_{d}"] = -n * weight[i]
        lp.add(row, "<=", n)
    return lp


def check_price_system(inst: Instance, committee: Iterable[int], system: PriceSystem) -> bool:
    """Exact re-evaluation of C1-C5 for a certificate."""
    w = frozenset(committee)
    n, budget = inst.n, system.budget
    if budget <= 0:
        return False
    pay = system.payments
    for (i, c), v in pay.items():
        if not (0 <= v <= 1) or c not in inst.ballots[i] or c not in w:
            return False  # C1, C4, range
    spent = [sum((v for (i, _), v in pay.items() if i == j), Fraction(0)) for j in range(n)]
    if any(s * n > budget for s in spent):
        return False  # C2
    for c in w:
        if sum((v for (_, d), v in pay.items() if d == c), Fraction(0)) != 1:
            return False  # C3
    for c in range(inst.m):
        if c in w:
            continue
        left = sum((budget / n - spent[i] for i in range(n) if c in inst.ballots[i]), Fraction(0))
        if left > 1:
            return False  # C5
    return True


# -- public API ------------------------------------------------------------------


def verify_mask(notion: NotionId, prof: Profile, w: int) -> ViolationWitness | None:
    """Hot-path entry: witness or None for a profile and committee bitmask."""
    return _VERIFIERS[notion](Pair(prof, w))


def verify(notion, inst: Instance, committee: Iterable[int]) -> VerificationResult:
    notion = NotionId.parse(notion)
    w = committee_mask(inst, committee)
    prof = Profile.of(inst)
    if notion is NotionId.PRICEABLE:
        ok, system = verify_priceable(inst, members_of(w))
        wit = None if ok else _wit(NotionId.PRICEABLE, prof.full_n)
        return VerificationResult(notion, ok, wit, system)
    wit = verify_mask(notion, prof, w)
    return VerificationResult(notion, wit is None, wit)


def verify_ejrp_fast(inst: Instance, committee: Iterable[int]) -> VerificationResult:
    return verify(NotionId.EJR_PLUS, inst, committee)


def verify_pjrp_fast(inst: Instance, committee: Iterable[int]) -> VerificationResult:
    return verify(NotionId.PJR_PLUS, inst, committee)


def pjrp_closure_values(inst: Instance, committee: Iterable[int]) -> dict:
    """Closure result per unelected candidate (diagnostics and tests)."""
    w = committee_mask(inst, committee)
    q = Pair(Profile.of(inst), w)
    return {c: _pjr_plus_closure(q, c) for c in range(inst.m) if not w >> c & 1}


def verify_priceable(inst: Instance, committee: Iterable[int]) -> tuple[bool, PriceSystem | None]:
    w = committee_mask(inst, committee)
    system = _price_system(inst, w)
    if system is None:
        return False, None
    if not check_price_system(inst, members_of(w), system):
        raise AssertionError("price system failed exact replay")
    return True, system


def satisfying_committees(notion, inst: Instance) -> list[frozenset[int]]:
    notion = NotionId.parse(notion)
    prof = Profile.of(inst)
    out = []
    for ws in combinations(range(inst.m), inst.k):
        if verify_mask(notion, prof, mask_of(ws)) is None:
            out.append(frozenset(ws))
    return out


# -- witness replay ----------------------------------------------------------------


def replay_witness(inst: Instance, committee: Iterable[int], wit: ViolationWitness) -> bool:
    """Re-derive the violation from the raw definition of ``wit.kind``."""
    kind = wit.kind
    w = frozenset(committee)
    n, k = inst.n, inst.k
    g = sorted(wit.group)
    if not g or any(not 0 <= i < n for i in g):
        return False
    ballots = inst.ballots
    util = {i: len(ballots[i] & w) for i in g}
    size = len(g)
    ell = wit.ell
    common = frozenset.intersection(*(ballots[i] for i in g))
    covered = frozenset().union(*(ballots[i] & w for i in g))
    anchor = next(iter(wit.anchors)) if len(wit.anchors) == 1 else None

    def large(l):
        return size * k >= l * n

    def single_anchor():
        return anchor is not None and anchor not in w and all(anchor in ballots[i] for i in g)

    if kind is NotionId.EMPTY:
        return size == n
    if kind is NotionId.UNIVERSAL:
        return False
    if kind is NotionId.JR:
        return large(1) and bool(common) and all(util[i] == 0 for i in g)
    if kind in (NotionId.PJR, NotionId.EJR, NotionId.OVERLAP_PJR):
        if ell is None or not 1 <= ell <= k or not large(ell) or len(common) < ell:
            return False
        if kind is NotionId.PJR:
            return len(covered) < ell
        if kind is NotionId.EJR:
            return all(util[i] < ell for i in g)
        same = len({ballots[i] & w for i in g}) == 1
        return same and util[g[0]] < ell
    if kind in (NotionId.PJR_PLUS, NotionId.EJR_PLUS, NotionId.WEAK_EJR_PLUS,
                NotionId.WEAK_PJR_PLUS, NotionId.DIFF_EJR_PLUS, NotionId.DIFF_PJR_PLUS,
                NotionId.EQUAL_EJR_PLUS, NotionId.DROOP_EJR_PLUS, NotionId.NPR) or (
            kind is NotionId.EJR_PLUS_EX_PARETO and wit.mode != "pareto"):
        if ell is None or not 1 <= ell <= k or not single_anchor():
            return False
        if kind is NotionId.DROOP_EJR_PLUS:
            if not size * (k + 1) > ell * n:
                return False
        elif not large(ell):
            return False
        if kind in (NotionId.WEAK_EJR_PLUS, NotionId.WEAK_PJR_PLUS):
            if frozenset(g) != frozenset(i for i in range(n) if anchor in ballots[i]):
                return False
        if kind in (NotionId.DIFF_EJR_PLUS, NotionId.DIFF_PJR_PLUS):
            if len({ballots[i] - w for i in g}) != 1:
                return False
        if kind in (NotionId.PJR_PLUS, NotionId.WEAK_PJR_PLUS, NotionId.DIFF_PJR_PLUS):
            return len(covered) < ell
        if kind is NotionId.EQUAL_EJR_PLUS:
            return len(set(util.values())) == 1 and util[g[0]] < ell
        if kind is NotionId.NPR:
            total = sum(util.values())
            return total <= (ell - 1) * size
        return all(util[i] < ell for i in g)
    if kind is NotionId.EJR_PLUS_EX_PARETO:
        alt = wit.anchors
        return (size == n and len(alt) == k and not (alt & w)
                and all(len(ballots[i] & alt) > len(ballots[i] & w) for i in range(n)))
    if kind in (NotionId.CORE, NotionId.FJR, NotionId.FPJR):
        t = wit.anchors
        if not t or len(t) > k or not large(len(t)):
            return False
        if kind is NotionId.CORE:
            return all(len(ballots[i] & t) > util[i] for i in g)
        if ell is None or ell < 1 or any(len(ballots[i] & t) < ell for i in g):
            return False
        if kind is NotionId.FJR:
            return all(util[i] < ell for i in g)
        return len(covered) < ell
    if kind is NotionId.SUBCORE:
        cs = wit.anchors
        if ell is None or not 1 <= ell <= k or not large(ell) or len(cs) > ell:
            return False
        return all((ballots[i] & cs) > (ballots[i] & w) for i in g)
    if kind is NotionId.PRICEABLE:
        return size == n and not verify_priceable(inst, w)[0]
    if kind is NotionId.LQ_PARTY_LIST:
        structure = party_list_structure(inst)
        if structure is None:
            return False
        for party, voters, q in zip(structure.parties, structure.party_voters,
                                    lower_quota_seats(structure, k)):
            if party == wit.anchors:
                return frozenset(g) == voters and len(party & w) < q
        return False
    raise ModelError(f"no replay rule for {kind}")
