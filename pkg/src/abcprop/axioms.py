"""Axioms as instance transformations, violation search, and constructive chains.

Transformation axioms are conditionals: if ``W`` is accepted on ``I`` then
it must stay accepted on every admissible ``I'``. Family scans only apply
single-step moves (one added approval, one changed voter, one removed
candidate, one adjacent transposition). A bounded family is closed under
these moves, so any multi-step violation inside it passes through a
single-step one: walk the steps in order and stop at the first rejection.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterable, Iterator

from .model import (
    Instance,
    ModelError,
    NotPartyListError,
    committee_mask,
    mask_of,
    members_of,
    party_list_structure,
    restrict_masks,
    satisfies_lower_quota,
)
from .notions import NotionId, Profile, ViolationWitness, replay_witness, verify, verify_mask
from .witness import (
    LocalEmbedding,
    check_local_embedding,
    check_merge_proofness,
    discontentment_failure,
    find_local_embedding,
    merge_failure_single_step,
    natural_witness_masks,
    witness_predicate,
)


class AxiomId(str, enum.Enum):
    MONOTONICITY = "monotonicity"
    INDEPENDENCE_OF_LOSERS = "iol"
    STRONG_IOL = "strong-iol"
    ROBUSTNESS_FSV = "rfsv"
    INDEPENDENCE_OF_APPROVAL_SWAPS = "ioas"
    LOWER_QUOTA_PARTY_LISTS = "lq-party-lists"
    LOWER_QUOTA_EXTENSION = "lq-extension"
    ANONYMITY = "anonymity"
    NEUTRALITY = "neutrality"
    INDEPENDENCE_OF_UNAPPROVED = "iuc"
    COHESIVENESS_BASED = "cohesiveness-based"
    INDIVIDUAL_DISCONTENTMENT = "individual-discontentment"
    MERGE_PROOFNESS = "merge-proofness"

    @classmethod
    def parse(cls, text: "str | AxiomId") -> "AxiomId":
        if isinstance(text, AxiomId):
            return text
        key = str(text).strip().lower().replace("_", "-")
        for member in cls:
            if key in (member.value, member.name.lower().replace("_", "-")):
                return member
        raise ValueError(f"unknown axiom id {text!r}")

    def __str__(self) -> str:
        return self.value


WITNESS_LEVEL = (
    AxiomId.COHESIVENESS_BASED,
    AxiomId.INDIVIDUAL_DISCONTENTMENT,
    AxiomId.MERGE_PROOFNESS,
)
LOWER_QUOTA = (AxiomId.LOWER_QUOTA_PARTY_LISTS, AxiomId.LOWER_QUOTA_EXTENSION)
# W accepted on I must stay accepted after the move
CONDITIONAL = (
    AxiomId.MONOTONICITY,
    AxiomId.INDEPENDENCE_OF_LOSERS,
    AxiomId.ROBUSTNESS_FSV,
    AxiomId.INDEPENDENCE_OF_APPROVAL_SWAPS,
)
# acceptance must be identical before and after
SYMMETRIC = (AxiomId.ANONYMITY, AxiomId.NEUTRALITY)


class AxiomError(ModelError):
    """Axiom not applicable in the requested way, or a bound was exceeded."""


@dataclass(frozen=True)
class AxiomVerdict:
    notion: NotionId
    axiom: AxiomId
    status: str  # "holds-on-family", "violated" or "not-applicable"
    instance: Instance | None = None
    committee: frozenset[int] | None = None
    transformed: Instance | None = None
    transformed_committee: frozenset[int] | None = None
    group: frozenset[int] | None = None
    detail: str = ""
    checked: int = 0
    family: str = ""

    @property
    def violated(self) -> bool:
        return self.status == "violated"

    def replay(self) -> bool:
        """Re-derive the violation from scratch."""
        if not self.violated:
            return False
        return _replay(self)

    def describe(self) -> str:
        if self.status != "violated":
            extra = f" ({self.checked} pairs, {self.family})" if self.family else ""
            return f"{self.notion} / {self.axiom}: {self.status}{extra}"
        return (f"{self.notion} / {self.axiom}: violated at W={_fmt(self.committee)}"
                f"{'; ' + self.detail if self.detail else ''}")


def _fmt(committee) -> str:
    return "{" + ",".join(f"c{c + 1}" for c in sorted(committee)) + "}"


# -- membership ---------------------------------------------------------------------


def _accepts(notion: NotionId, inst: Instance, w: int) -> bool | None:
    """W in f(I), or None when the notion is undefined on I."""
    try:
        return verify_mask(notion, Profile.of(inst), w) is None
    except NotPartyListError:
        return None


class VerdictTable:
    """Acceptance bits for a fixed list of notions, keyed by canonical instance.

    ``row(...)[j]`` holds one bit per notion for the j-th committee in
    ``combinations(range(m), k)`` order.
    """

    def __init__(self, notions: Iterable[NotionId]):
        self.notions = tuple(NotionId.parse(x) for x in notions)
        self.bit = {nid: 1 << j for j, nid in enumerate(self.notions)}
        self.all_bits = (1 << len(self.notions)) - 1
        self.rows: dict = {}
        self._index: dict = {}

    def committee_index(self, m: int, k: int) -> dict:
        idx = self._index.get((m, k))
        if idx is None:
            idx = {mask_of(ws): j for j, ws in enumerate(combinations(range(m), k))}
            self._index[m, k] = idx
        return idx

    def row(self, m: int, k: int, masks) -> tuple[int, ...]:
        key = (m, k, tuple(sorted(masks)))
        row = self.rows.get(key)
        if row is None:
            row = _table_row(self.notions, key)
            self.rows[key] = row
        return row

    def bits(self, m: int, k: int, masks, w: int) -> int:
        return self.row(m, k, masks)[self.committee_index(m, k)[w]]

    def fill(self, instances: Iterable[Instance], jobs: int = 1) -> "VerdictTable":
        from .oracle import parallel_map

        keys = [(i.m, i.k, tuple(sorted(i.masks))) for i in instances]
        keys = [key for key in keys if key not in self.rows]
        if jobs <= 1:
            for key in keys:
                self.rows[key] = _table_row(self.notions, key)
            return self
        chunks = [keys[i:i + 4000] for i in range(0, len(keys), 4000)]
        for chunk, rows in zip(chunks, parallel_map(_table_chunk,
                                                    [(self.notions, c) for c in chunks], jobs)):
            self.rows.update(zip(chunk, rows))
        return self


def _table_row(notions, key) -> tuple[int, ...]:
    m, k, masks = key
    prof = Profile(m, k, masks)
    out = []
    for ws in combinations(range(m), k):
        w = mask_of(ws)
        bits = 0
        for j, nid in enumerate(notions):
            if verify_mask(nid, prof, w) is None:
                bits |= 1 << j
        out.append(bits)
    return tuple(out)


def _table_chunk(args):
    notions, keys = args
    return [_table_row(notions, key) for key in keys]


class _Decider:
    """Membership through a verdict table when possible, else direct."""

    def __init__(self, table: VerdictTable | None):
        self.table = table

    def accepts(self, notion: NotionId, m: int, k: int, masks, w: int) -> bool | None:
        t = self.table
        if t is not None and notion in t.bit:
            return bool(t.bits(m, k, masks, w) & t.bit[notion])
        return _accepts(notion, Instance.from_masks(m, k, masks), w)


# -- transformations -------------------------------------------------------------


def _subsets_of(mask: int) -> list[int]:
    out = [0]
    for c in members_of(mask):
        out += [s | 1 << c for s in out]
    return out


def _relabel_committee(w: int, keep: int, m: int) -> int:
    return restrict_masks((w,), keep, m)[0]


def _single_moves(axiom: AxiomId, m: int, k: int, masks: tuple, w: int) -> Iterator[tuple]:
    """Single-step admissible moves as (m', masks', w')."""
    n = len(masks)
    full = (1 << m) - 1
    if axiom is AxiomId.MONOTONICITY:
        for i in range(n):
            for c in members_of(w & ~masks[i]):
                yield m, masks[:i] + (masks[i] | 1 << c,) + masks[i + 1:], w
    elif axiom is AxiomId.ROBUSTNESS_FSV:
        for i in range(n):
            inside = masks[i] & w
            for s in _subsets_of(inside):
                if s != masks[i]:
                    yield m, masks[:i] + (s,) + masks[i + 1:], w
    elif axiom is AxiomId.INDEPENDENCE_OF_APPROVAL_SWAPS:
        for i in range(n):
            outside, size = masks[i] & ~w, (masks[i] & w).bit_count()
            for s in _subsets_of(w):
                if s.bit_count() == size and s != masks[i] & w:
                    yield m, masks[:i] + (outside | s,) + masks[i + 1:], w
    elif axiom in (AxiomId.INDEPENDENCE_OF_LOSERS, AxiomId.INDEPENDENCE_OF_UNAPPROVED):
        approved = 0
        for b in masks:
            approved |= b
        for c in members_of(full & ~w):
            if axiom is AxiomId.INDEPENDENCE_OF_UNAPPROVED and approved >> c & 1:
                continue
            keep = full & ~(1 << c)
            yield m - 1, restrict_masks(masks, keep, m), _relabel_committee(w, keep, m)
    elif axiom is AxiomId.NEUTRALITY:
        for c in range(m - 1):
            yield m, tuple(_swap_bits(b, c, c + 1) for b in masks), _swap_bits(w, c, c + 1)
    elif axiom is AxiomId.ANONYMITY:
        for i in range(n - 1):
            if masks[i] != masks[i + 1]:
                yield m, masks[:i] + (masks[i + 1], masks[i]) + masks[i + 2:], w
    else:
        raise AxiomError(f"{axiom} has no single-step moves")


def _swap_bits(x: int, a: int, b: int) -> int:
    if (x >> a & 1) != (x >> b & 1):
        x ^= (1 << a) | (1 << b)
    return x


def transform(axiom, inst: Instance, committee: Iterable[int], limit: int = 1 << 16,
              sample: bool = True, seed: int = 0) -> Iterator[tuple[Instance, frozenset[int]]]:
    """Every admissible transformed instance with the (relabelled) committee.

    Enumerates exhaustively when at most ``limit`` profiles are admissible;
    otherwise yields all single-step moves followed by ``limit`` seeded
    samples, or raises when ``sample`` is false.
    """
    axiom = AxiomId.parse(axiom)
    w = committee_mask(inst, committee)
    m, k, masks = inst.m, inst.k, inst.masks
    n = inst.n

    def out(mm, mk, ww):
        return Instance.from_masks(mm, k, mk), frozenset(members_of(ww))

    options = None
    if axiom is AxiomId.MONOTONICITY:
        options = [[masks[i] | s for s in _subsets_of(w & ~masks[i])] for i in range(n)]
    elif axiom is AxiomId.ROBUSTNESS_FSV:
        options = [[masks[i]] + [s for s in _subsets_of(masks[i] & w) if s != masks[i]]
                   for i in range(n)]
    elif axiom is AxiomId.INDEPENDENCE_OF_APPROVAL_SWAPS:
        options = []
        for b in masks:
            size = (b & w).bit_count()
            options.append([(b & ~w) | s for s in _subsets_of(w) if s.bit_count() == size])
    elif axiom in (AxiomId.INDEPENDENCE_OF_LOSERS, AxiomId.INDEPENDENCE_OF_UNAPPROVED):
        for mm, mk, ww in _single_moves(axiom, m, k, masks, w):
            yield out(mm, mk, ww)
        return
    elif axiom is AxiomId.STRONG_IOL:
        full = (1 << m) - 1
        for c in members_of(full & ~w):
            keep = w | 1 << c
            yield out(k + 1, restrict_masks(masks, keep, m), _relabel_committee(w, keep, m))
        return
    elif axiom is AxiomId.ANONYMITY:
        seen = {masks}
        count = 0
        for perm in permutations(range(n)):
            mk = tuple(masks[p] for p in perm)
            if mk not in seen:
                seen.add(mk)
                count += 1
                if count > limit:
                    raise AxiomError("voter permutations exceed the bound")
                yield out(m, mk, w)
        return
    elif axiom is AxiomId.NEUTRALITY:
        count = 0
        for perm in permutations(range(m)):
            count += 1
            if count > limit:
                raise AxiomError("candidate relabelings exceed the bound")
            relabel = lambda x: mask_of(perm[c] for c in members_of(x))  # noqa: E731
            yield out(m, tuple(relabel(b) for b in masks), relabel(w))
        return
    else:
        raise AxiomError(f"{axiom} is not transformation-shaped")

    total = 1
    for o in options:
        total *= len(o)
    if total <= limit:
        for choice in product(*options):
            if choice != masks:
                yield out(m, tuple(choice), w)
        return
    if not sample:
        raise AxiomError(f"{total} transformed profiles exceed the bound {limit}")
    for mm, mk, ww in _single_moves(axiom, m, k, masks, w):
        yield out(mm, mk, ww)
    rng = random.Random(seed)
    for _ in range(limit):
        yield out(m, tuple(rng.choice(o) for o in options), w)


# -- per-pair checks --------------------------------------------------------------


def _lq_accepts(inst: Instance, w: int) -> bool:
    return satisfies_lower_quota(inst, members_of(w))


def check_axiom(notion, axiom, inst: Instance, committee: Iterable[int],
                limit: int = 1 << 16, merge_budget: int = 1 << 20) -> AxiomVerdict:
    """Verdict of one axiom at one (instance, committee) pair."""
    notion, axiom = NotionId.parse(notion), AxiomId.parse(axiom)
    w = committee_mask(inst, committee)
    wset = frozenset(members_of(w))
    here = _accepts(notion, inst, w)

    def violated(**kw):
        return AxiomVerdict(notion, axiom, "violated", inst, wset, checked=1, **kw)

    na = AxiomVerdict(notion, axiom, "not-applicable", inst, wset)
    if axiom in LOWER_QUOTA:
        if party_list_structure(inst) is None:
            return na
        lq = _lq_accepts(inst, w)
        if axiom is AxiomId.LOWER_QUOTA_PARTY_LISTS:
            if here and not lq:
                return violated(detail="accepted but below lower quota")
        elif here != lq:
            return violated(detail=f"accepted={here} but lower quota={lq}")
        return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)
    if axiom in WITNESS_LEVEL:
        if here:
            return na
        p = Profile.of(inst)
        for x in natural_witness_masks(notion, p, w):
            group = frozenset(members_of(x))
            if axiom is AxiomId.COHESIVENESS_BASED:
                if not p.inter[x] & ~w:
                    return violated(group=group, detail="witness shares no unelected candidate")
            elif axiom is AxiomId.INDIVIDUAL_DISCONTENTMENT:
                j = discontentment_failure(notion, p, w, x)
                if j is not None:
                    from .witness import discontent_profile

                    changed = Instance.from_masks(inst.m, inst.k,
                                                  discontent_profile(p.masks, x, j))
                    return violated(group=group, transformed=changed, transformed_committee=wset,
                                    detail=f"group adopts voter {j + 1}'s ballot")
            else:
                res = check_merge_proofness(notion, inst, wset, group, budget=merge_budget)
                if res.status == "false":
                    changed = Instance(inst.m, inst.k, res.failing_profile)
                    return violated(group=group, transformed=changed, transformed_committee=wset,
                                    detail="merged ballots dissolve the witness")
                if res.status == "exhausted":
                    return AxiomVerdict(notion, axiom, "exhausted", inst, wset, group=group)
        return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)
    if axiom is AxiomId.STRONG_IOL:
        rhs = True
        for sub, sw in transform(axiom, inst, wset):
            if _accepts(notion, sub, mask_of(sw)) is False:
                rhs = False
                if not here:
                    return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)
                return violated(transformed=sub, transformed_committee=sw,
                                detail="accepted, but rejected after keeping W and one loser")
        if here is False and rhs:
            return violated(detail="rejected, yet accepted on every W plus one loser")
        return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)
    if here is None:
        return na
    if axiom is AxiomId.INDEPENDENCE_OF_UNAPPROVED:
        if here:
            return na
        for sub, sw in transform(axiom, inst, wset):
            if _accepts(notion, sub, mask_of(sw)):
                return violated(transformed=sub, transformed_committee=sw,
                                detail="accepted once an unapproved loser is removed")
        return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)
    if axiom in CONDITIONAL and not here:
        return na
    for sub, sw in transform(axiom, inst, wset, limit=limit):
        there = _accepts(notion, sub, mask_of(sw))
        if there is None:
            continue
        if there != here:
            return violated(transformed=sub, transformed_committee=sw,
                            detail=f"accepted={here} before, {there} after")
    return AxiomVerdict(notion, axiom, "holds-on-family", inst, wset, checked=1)


def _replay(v: AxiomVerdict) -> bool:
    """Independent re-check of a violated verdict using the public verifiers."""
    notion, axiom = v.notion, v.axiom
    inst, w = v.instance, v.committee

    def sat(i, c):
        try:
            return verify(notion, i, c).satisfied
        except NotPartyListError:
            return None

    if axiom in LOWER_QUOTA:
        if party_list_structure(inst) is None:
            return False
        here, lq = sat(inst, w), satisfies_lower_quota(inst, w)
        return (here and not lq) if axiom is AxiomId.LOWER_QUOTA_PARTY_LISTS else here != lq
    if axiom in WITNESS_LEVEL:
        p, wm, x = Profile.of(inst), mask_of(w), mask_of(v.group)
        if sat(inst, w) or not witness_predicate(notion, p, wm, x):
            return False
        if axiom is AxiomId.COHESIVENESS_BASED:
            return not p.inter[x] & ~wm
        q = Profile.of(v.transformed)
        if axiom is AxiomId.MERGE_PROOFNESS:
            for i in range(inst.n):
                a, b = inst.masks[i], v.transformed.masks[i]
                if x >> i & 1:
                    if a & ~b or b & ~p.union[x]:
                        return False
                elif a != b:
                    return False
        else:
            firsts = {v.transformed.masks[i] for i in members_of(x)}
            if len(firsts) != 1 or next(iter(firsts)) not in [inst.masks[j] for j in members_of(x)]:
                return False
            if any(v.transformed.masks[i] != inst.masks[i] for i in range(inst.n) if not x >> i & 1):
                return False
        return not witness_predicate(notion, q, wm, x)
    if axiom is AxiomId.STRONG_IOL:
        here = sat(inst, w)
        if v.transformed is not None:
            return here and sat(v.transformed, v.transformed_committee) is False
        return here is False and all(sat(s, sw) for s, sw in transform(axiom, inst, w))
    if not _admissible(axiom, inst, w, v.transformed, v.transformed_committee):
        return False
    before, after = sat(inst, w), sat(v.transformed, v.transformed_committee)
    if axiom is AxiomId.INDEPENDENCE_OF_UNAPPROVED:
        return before is False and after is True
    if axiom in SYMMETRIC:
        return before is not None and after is not None and before != after
    return before is True and after is False


def _admissible(axiom, inst, w, new, new_w) -> bool:
    """Does (new, new_w) arise from (inst, w) under the axiom's definition?"""
    wm = mask_of(w)
    if axiom in (AxiomId.MONOTONICITY, AxiomId.ROBUSTNESS_FSV,
                 AxiomId.INDEPENDENCE_OF_APPROVAL_SWAPS):
        if new.m != inst.m or new.n != inst.n or new_w != w:
            return False
        for a, b in zip(inst.masks, new.masks):
            if axiom is AxiomId.MONOTONICITY and (a & ~b or b & ~a & ~wm):
                return False
            if axiom is AxiomId.ROBUSTNESS_FSV and a != b and b & ~(a & wm):
                return False
            if axiom is AxiomId.INDEPENDENCE_OF_APPROVAL_SWAPS and (
                    a & ~wm != b & ~wm or (a & wm).bit_count() != (b & wm).bit_count()):
                return False
        return True
    if axiom in (AxiomId.INDEPENDENCE_OF_LOSERS, AxiomId.INDEPENDENCE_OF_UNAPPROVED):
        for sub, sw in transform(axiom, inst, w):
            if sub.masks == new.masks and sub.m == new.m and sw == new_w:
                return True
        return False
    if axiom is AxiomId.ANONYMITY:
        return new.m == inst.m and sorted(new.masks) == sorted(inst.masks) and new_w == w
    if axiom is AxiomId.NEUTRALITY:
        return any(
            tuple(mask_of(perm[c] for c in members_of(b)) for b in inst.masks) == new.masks
            and frozenset(perm[c] for c in w) == new_w
            for perm in permutations(range(inst.m))
        )
    return False


# -- family search -----------------------------------------------------------------


def _pair_failures(axiom: AxiomId, notions, decide: _Decider, inst: Instance, w: int,
                   pending: set) -> dict:
    """Notions (among ``pending``) failing the axiom at (inst, w) via single moves."""
    m, k, masks = inst.m, inst.k, inst.masks
    found: dict = {}
    if axiom in LOWER_QUOTA:
        if party_list_structure(inst) is None:
            return found
        lq = _lq_accepts(inst, w)
        for nid in pending:
            here = decide.accepts(nid, m, k, masks, w)
            bad = (here and not lq) if axiom is AxiomId.LOWER_QUOTA_PARTY_LISTS else here != lq
            if bad:
                found[nid] = None
        return found
    if axiom in WITNESS_LEVEL:
        p = Profile.of(inst)
        for nid in pending:
            if decide.accepts(nid, m, k, masks, w):
                continue
            for x in natural_witness_masks(nid, p, w):
                if axiom is AxiomId.COHESIVENESS_BASED:
                    bad = not p.inter[x] & ~w
                elif axiom is AxiomId.INDIVIDUAL_DISCONTENTMENT:
                    bad = discontentment_failure(nid, p, w, x) is not None
                else:
                    bad = merge_failure_single_step(nid, p, w, x) is not None
                if bad:
                    found[nid] = x
                    break
        return found
    if axiom is AxiomId.STRONG_IOL:
        subs = [(k + 1, restrict_masks(masks, w | 1 << c, m),
                 _relabel_committee(w, w | 1 << c, m))
                for c in members_of(((1 << m) - 1) & ~w)]
        for nid in pending:
            here = decide.accepts(nid, m, k, masks, w)
            rhs = all(decide.accepts(nid, mm, k, mk, ww) for mm, mk, ww in subs)
            if here != rhs:
                found[nid] = None
        return found
    here = {nid: decide.accepts(nid, m, k, masks, w) for nid in pending}
    if axiom in CONDITIONAL:
        live = [nid for nid in pending if here[nid]]
    elif axiom is AxiomId.INDEPENDENCE_OF_UNAPPROVED:
        live = [nid for nid in pending if here[nid] is False]
    else:
        live = [nid for nid in pending if here[nid] is not None]
    if not live:
        return found
    for mm, mk, ww in _single_moves(axiom, m, k, masks, w):
        for nid in live:
            if nid in found:
                continue
            there = decide.accepts(nid, mm, k, mk, ww)
            if there is None:
                continue
            if there != here[nid]:
                found[nid] = (mm, mk, ww)
        if len(found) == len(live):
            break
    return found


def _verdict_from_pair(nid, axiom, inst, w, payload, family_label) -> AxiomVerdict:
    """Turn a scan hit into a full, replayable verdict via :func:`check_axiom`."""
    v = check_axiom(nid, axiom, inst, members_of(w))
    if v.violated:
        return AxiomVerdict(**{**v.__dict__, "family": family_label})
    # single-step evidence the exhaustive transform did not reproduce; keep the move
    if isinstance(payload, tuple):
        mm, mk, ww = payload
        return AxiomVerdict(nid, axiom, "violated", inst, frozenset(members_of(w)),
                            Instance.from_masks(mm, inst.k, mk), frozenset(members_of(ww)),
                            detail="single-step move", family=family_label)
    raise AxiomError(f"scan hit for {nid}/{axiom} did not replay")


def scan_axiom(axiom, notions, family: Iterable[Instance], table: VerdictTable | None = None,
               shrink: bool = True) -> dict:
    """First violation per notion over the family (canonical order), else a certificate."""
    axiom = AxiomId.parse(axiom)
    notions = [NotionId.parse(x) for x in notions]
    # canonical table rows would hide voter order, so anonymity decides directly
    decide = _Decider(None if axiom is AxiomId.ANONYMITY else table)
    pending = set(notions)
    hits: dict = {}
    checked = 0
    label = family.label() if hasattr(family, "label") else "given instances"
    for inst in family:
        if not pending:
            break
        for ws in combinations(range(inst.m), inst.k):
            w = mask_of(ws)
            checked += 1
            found = _pair_failures(axiom, notions, decide, inst, w, pending)
            for nid, payload in found.items():
                hits[nid] = (inst, w, payload)
                pending.discard(nid)
            if not pending:
                break
    out = {}
    for nid in notions:
        if nid in hits:
            inst, w, payload = hits[nid]
            if shrink:
                inst, w = shrink_counterexample(nid, axiom, inst, w, decide)
            out[nid] = _verdict_from_pair(nid, axiom, inst, w, payload, label)
        else:
            out[nid] = AxiomVerdict(nid, axiom, "holds-on-family", checked=checked, family=label)
    return out


def search_axiom_violation(notion, axiom, family: Iterable[Instance],
                           table: VerdictTable | None = None, shrink: bool = True) -> AxiomVerdict:
    notion = NotionId.parse(notion)
    return scan_axiom(axiom, [notion], family, table, shrink)[notion]


def shrink_counterexample(notion, axiom, inst: Instance, w: int,
                          decide: _Decider | None = None) -> tuple[Instance, int]:
    """Greedily drop voters, then losing candidates, then approvals while it still fails."""
    decide = decide or _Decider(None)

    def fails(i: Instance, ww: int) -> bool:
        return notion in _pair_failures(axiom, [notion], decide, i, ww, {notion})

    changed = True
    while changed:
        changed = False
        for v in range(inst.n):
            if inst.n == 1:
                break
            cand = Instance.from_masks(inst.m, inst.k, inst.masks[:v] + inst.masks[v + 1:])
            if fails(cand, w):
                inst, changed = cand, True
                break
        if changed:
            continue
        full = (1 << inst.m) - 1
        for c in members_of(full & ~w):
            keep = full & ~(1 << c)
            cand = Instance.from_masks(inst.m - 1, inst.k, restrict_masks(inst.masks, keep, inst.m))
            cw = _relabel_committee(w, keep, inst.m)
            if fails(cand, cw):
                inst, w, changed = cand, cw, True
                break
        if changed:
            continue
        for v in range(inst.n):
            for c in members_of(inst.masks[v]):
                masks = list(inst.masks)
                masks[v] &= ~(1 << c)
                cand = Instance.from_masks(inst.m, inst.k, masks)
                if fails(cand, w):
                    inst, changed = cand, True
                    break
            if changed:
                break
    return inst, w


def check_strong_iol(notion, family: Iterable[Instance],
                     table: VerdictTable | None = None) -> AxiomVerdict:
    """W accepted iff no single loser c makes W rejected on the restriction to W + c."""
    return search_axiom_violation(notion, AxiomId.STRONG_IOL, family, table, shrink=False)


def verdicts_tsv(verdicts: Iterable[AxiomVerdict], paths: dict | None = None) -> str:
    paths = paths or {}
    lines = ["notion\taxiom\tstatus\tevidence"]
    for v in verdicts:
        lines.append(f"{v.notion}\t{v.axiom}\t{v.status}\t{paths.get((v.notion, v.axiom), '-')}")
    return "\n".join(lines) + "\n"


# -- constructive chains -------------------------------------------------------------


@dataclass(frozen=True)
class ChainResult:
    """Final instance of a proof chain with the committee in its labels."""

    instance: Instance
    committee: frozenset[int]
    steps: tuple[Instance, ...] = ()
    candidate_map: dict = field(default_factory=dict)
    embedding: LocalEmbedding | None = None


def _plus_witness_parts(inst: Instance, w: int, wit: ViolationWitness):
    if len(wit.anchors) != 1 or wit.ell is None:
        raise AxiomError("need a single-candidate witness with a seat demand")
    check = ViolationWitness(NotionId.PJR_PLUS, wit.group, wit.ell, wit.anchors)
    if not replay_witness(inst, members_of(w), check):
        raise AxiomError("witness does not replay as a PJR+ violation")
    c = next(iter(wit.anchors))
    group = mask_of(wit.group)
    covered = 0
    for i in wit.group:
        covered |= inst.masks[i] & w
    return c, group, covered


def _relabelled(m: int, k: int, masks, keep: int, w: int):
    sub = Instance.from_masks(keep.bit_count(), k, restrict_masks(masks, keep, m))
    cmap = {c: j for j, c in enumerate(members_of(keep))}
    return sub, frozenset(members_of(_relabel_committee(w, keep, m))), cmap


def refute_via_party_list(inst: Instance, committee: Iterable[int],
                          witness: ViolationWitness) -> ChainResult:
    """Turn a PJR+ violation into a party-list instance where W misses lower quota.

    Keep only W and the witness candidate c, let the group approve exactly
    the winners they cover plus c, and let everyone else approve the
    remaining winners.
    """
    w = committee_mask(inst, committee)
    c, group, covered = _plus_witness_parts(inst, w, witness)
    if covered == w:
        raise AxiomError("the group already covers the whole committee")
    keep = w | 1 << c
    step1 = Instance.from_masks(inst.m, inst.k, [b & keep for b in inst.masks])
    step2 = Instance.from_masks(inst.m, inst.k, [
        (b | covered) if group >> i & 1 else b for i, b in enumerate(step1.masks)])
    final = [(covered | 1 << c) if group >> i & 1 else (w & ~covered)
             for i in range(inst.n)]
    step3, w3, cmap = _relabelled(inst.m, inst.k, final, keep, w)
    if party_list_structure(step3) is None:
        raise AxiomError("chain did not produce a party-list instance")
    return ChainResult(step3, w3, (step1, step2), cmap)


def pjr_violation_from_plus(inst: Instance, committee: Iterable[int],
                            witness: ViolationWitness) -> Instance:
    """Add the covered winners to every group ballot; W then fails PJR."""
    w = committee_mask(inst, committee)
    c, group, covered = _plus_witness_parts(inst, w, witness)
    masks = [(b | covered) if group >> i & 1 else b for i, b in enumerate(inst.masks)]
    out = Instance.from_masks(inst.m, inst.k, masks)
    if verify(NotionId.PJR, out, members_of(w)).satisfied:
        raise AxiomError("monotone extension did not produce a PJR violation")
    return out


def coarsening_chain(notion, inst: Instance, committee: Iterable[int],
                     group: Iterable[int]) -> ChainResult:
    """Build the party-list instance where W meets lower quota yet the group persists.

    ``notion`` is EJR+ (group adopts its best-served member's ballot) or PJR+
    (group adopts the union of its ballots). W must satisfy the notion and
    the group must share an unelected candidate.
    """
    notion = NotionId.parse(notion)
    if notion not in (NotionId.EJR_PLUS, NotionId.PJR_PLUS):
        raise AxiomError("coarsening chains exist for EJR+ and PJR+ only")
    w = committee_mask(inst, committee)
    x = mask_of(group)
    if not x:
        raise AxiomError("empty group")
    if not verify(notion, inst, members_of(w)).satisfied:
        raise AxiomError(f"committee does not satisfy {notion}")
    members = members_of(x)
    common = inst.masks[members[0]]
    for i in members:
        common &= inst.masks[i]
    if not common & ~w:
        raise AxiomError("group shares no unelected candidate")
    n, k = inst.n, inst.k
    ell = k * len(members) // n
    if notion is NotionId.EJR_PLUS:
        best = max(members, key=lambda i: ((inst.masks[i] & w).bit_count(), -i))
        ballot = inst.masks[best]
        if (ballot & w).bit_count() < ell:
            raise AxiomError("no member reaches the seat demand")
    else:
        ballot = 0
        for i in members:
            ballot |= inst.masks[i]
        if (ballot & w).bit_count() < ell:
            raise AxiomError("the group's union misses the seat demand")
    step2 = Instance.from_masks(inst.m, k, [ballot if x >> i & 1 else b
                                            for i, b in enumerate(inst.masks)])
    rest = w & ~ballot
    other = rest if rest else ballot
    final = [ballot if x >> i & 1 else other for i in range(n)]
    keep = w | ballot
    step3, w3, cmap = _relabelled(inst.m, k, final, keep, w)
    if party_list_structure(step3) is None:
        raise AxiomError("chain did not produce a party-list instance")
    emb = find_local_embedding(step2, members, members_of(w), step3, members, w3)
    if emb is None or not check_local_embedding(step2, members, members_of(w), step3,
                                                members, w3, emb):
        raise AxiomError("group does not embed into the party-list instance")
    return ChainResult(step3, w3, (step2,), cmap, emb)
