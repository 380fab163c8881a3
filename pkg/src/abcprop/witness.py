"""Natural witness functions, local embeddings and witness-level properties.

A natural witness for a notion is a voter group that by itself certifies a
violation, e.g. an l-large group of supporters of an unelected candidate
who all have fewer than l winners (EJR+).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable

from .model import (
    Instance,
    ModelError,
    committee_mask,
    lower_quota_seats,
    mask_of,
    members_of,
    party_list_structure,
)
from .notions import NotionId, Profile, _is_priceable

NO_NATURAL_WITNESS = (NotionId.UNIVERSAL, NotionId.EMPTY)
MERGE_ENUMERATION_CAP = 1 << 20


class WitnessError(ModelError):
    """Notion without natural witness semantics, or a bound was exceeded."""


# -- natural witness predicates ----------------------------------------------------


def _hare_ell(p: Profile, x: int) -> int:
    return min(p.k, p.size[x] * p.k // p.n)


def _utils(p: Profile, w: int, x: int) -> list[int]:
    return [(p.masks[i] & w).bit_count() for i in members_of(x)]


def _deviates(p: Profile, w: int, x: int, fair: str | None) -> bool:
    """Core-like test over every proposed set T with ``|T| <= k``."""
    n, k = p.n, p.k
    size = p.size[x]
    voters = members_of(x)
    utils = _utils(p, w, x)
    uw = (p.union[x] & w).bit_count()
    for t, tsize in p.small_sets:
        if size * k < tsize * n:
            break  # small_sets is ordered by size
        hits = [(p.masks[i] & t).bit_count() for i in voters]
        if fair is None:
            if all(h > u for h, u in zip(hits, utils)):
                return True
            continue
        beta = min(hits)
        if beta < 1:
            continue
        if fair == "fjr" and max(utils) < beta:
            return True
        if fair == "fpjr" and uw < beta:
            return True
    return False


def _subcore_witness(p: Profile, w: int, x: int) -> bool:
    ell = _hare_ell(p, x)
    uw = (p.union[x] & w).bit_count()
    if ell < 1 or uw >= ell:
        return False
    losers = members_of(p.full_c & ~w)
    voters = members_of(x)
    for r in range(1, ell - uw + 1):
        for cs in combinations(losers, r):
            cm = mask_of(cs)
            if all(p.masks[i] & cm for i in voters):
                return True
    return False


def witness_predicate(notion, p: Profile, w: int, x: int) -> bool:
    """Is voter bitmask ``x`` a natural witness for ``notion`` at committee ``w``?"""
    notion = NotionId.parse(notion)
    if not x:
        return False
    n, k = p.n, p.k
    size = p.size[x]
    inter, union = p.inter[x], p.union[x]
    uw = (union & w).bit_count()
    fresh = inter & ~w  # unelected candidates the whole group approves
    if notion in NO_NATURAL_WITNESS:
        raise WitnessError(f"{notion} has no natural witness function")
    if notion is NotionId.JR:
        return size * k >= n and inter != 0 and uw == 0
    if notion in (NotionId.PJR, NotionId.EJR, NotionId.OVERLAP_PJR):
        ell = min(inter.bit_count(), size * k // n, k)
        if ell < 1:
            return False
        if notion is NotionId.PJR:
            return uw < ell
        if notion is NotionId.EJR:
            return max(_utils(p, w, x)) < ell
        return (union & w) == (inter & w) and uw < ell
    if notion is NotionId.EJR_PLUS_EX_PARETO:
        if witness_predicate(NotionId.EJR_PLUS, p, w, x):
            return True
        if x != p.full_n:
            return False
        for alt in combinations(members_of(p.full_c & ~w), k):
            am = mask_of(alt)
            if all((b & am).bit_count() > (b & w).bit_count() for b in p.masks):
                return True
        return False
    if notion in (NotionId.PJR_PLUS, NotionId.EJR_PLUS, NotionId.WEAK_EJR_PLUS,
                  NotionId.WEAK_PJR_PLUS, NotionId.DIFF_EJR_PLUS, NotionId.DIFF_PJR_PLUS,
                  NotionId.EQUAL_EJR_PLUS, NotionId.DROOP_EJR_PLUS, NotionId.NPR):
        if not fresh:
            return False
        if notion is NotionId.DROOP_EJR_PLUS:
            ell = min(k, (size * (k + 1) - 1) // n)
        else:
            ell = min(k, size * k // n)
        if ell < 1:
            return False
        utils = _utils(p, w, x)
        if notion in (NotionId.WEAK_EJR_PLUS, NotionId.WEAK_PJR_PLUS):
            if not any(p.supp[c] == x for c in members_of(fresh)):
                return False
        if notion in (NotionId.DIFF_EJR_PLUS, NotionId.DIFF_PJR_PLUS):
            if (union & ~w) != (inter & ~w):
                return False
        if notion is NotionId.EQUAL_EJR_PLUS and len(set(utils)) != 1:
            return False
        if notion is NotionId.NPR:
            return sum(utils) <= (ell - 1) * size
        if notion in (NotionId.PJR_PLUS, NotionId.WEAK_PJR_PLUS, NotionId.DIFF_PJR_PLUS):
            return uw < ell
        return max(utils) < ell
    if notion is NotionId.CORE:
        return _deviates(p, w, x, None)
    if notion is NotionId.FJR:
        return _deviates(p, w, x, "fjr")
    if notion is NotionId.FPJR:
        return _deviates(p, w, x, "fpjr")
    if notion is NotionId.SUBCORE:
        return _subcore_witness(p, w, x)
    if notion is NotionId.PRICEABLE:
        return x == p.full_n and not _is_priceable(p, w)
    if notion is NotionId.LQ_PARTY_LIST:
        inst = Instance.from_masks(p.m, p.k, p.masks)
        structure = party_list_structure(inst)
        if structure is None:
            raise WitnessError("lower quota witnesses need a party-list instance")
        for party, voters, q in zip(structure.parties, structure.party_voters,
                                    lower_quota_seats(structure, k)):
            if mask_of(voters) == x:
                return (mask_of(party) & w).bit_count() < q
        return False
    raise WitnessError(f"no witness predicate for {notion}")


@dataclass(frozen=True)
class WitnessSet:
    notion: NotionId
    groups: frozenset[frozenset[int]]


def natural_witness_masks(notion, p: Profile, w: int) -> list[int]:
    notion = NotionId.parse(notion)
    return [x for x in range(1, 1 << p.n) if witness_predicate(notion, p, w, x)]


def natural_witnesses(notion, inst: Instance, committee: Iterable[int],
                      max_voters: int = 20) -> WitnessSet:
    notion = NotionId.parse(notion)
    if notion in NO_NATURAL_WITNESS:
        raise WitnessError(f"{notion} has no natural witness function")
    if inst.n > max_voters:
        raise WitnessError(f"2^{inst.n} groups exceed the enumeration bound")
    w = committee_mask(inst, committee)
    masks = natural_witness_masks(notion, Profile.of(inst), w)
    return WitnessSet(notion, frozenset(frozenset(members_of(x)) for x in masks))


def is_natural_witness(notion, inst: Instance, committee: Iterable[int],
                       group: Iterable[int]) -> bool:
    w = committee_mask(inst, committee)
    group = list(group)
    if any(not 0 <= i < inst.n for i in group):
        raise WitnessError(f"group {sorted(group)} names a voter outside 0..{inst.n - 1}")
    return witness_predicate(notion, Profile.of(inst), w, mask_of(group))


# -- local embeddings ------------------------------------------------------------


@dataclass(frozen=True)
class LocalEmbedding:
    voter_map: dict  # source voter -> target voter
    candidate_map: dict  # source candidate -> target candidate


def _embedding_domain(inst: Instance, group, w: int) -> int:
    dom = w
    for i in group:
        dom |= inst.masks[i]
    return dom


def check_local_embedding(inst: Instance, group, committee, target: Instance, target_group,
                          target_committee, emb: LocalEmbedding) -> bool:
    """Replay both invariants of a local embedding."""
    group, target_group = sorted(group), sorted(target_group)
    w = mask_of(committee)
    tw = mask_of(target_committee)
    vm, cm = emb.voter_map, emb.candidate_map
    if sorted(vm) != group or sorted(vm.values()) != target_group:
        return False
    dom = members_of(_embedding_domain(inst, group, w))
    if sorted(cm) != list(dom) or len(set(cm.values())) != len(dom):
        return False
    if mask_of(cm[c] for c in members_of(w)) != tw:
        return False
    for j in group:
        for c in dom:
            if (inst.masks[j] >> c & 1) != (target.masks[vm[j]] >> cm[c] & 1):
                return False
    return True


def _match_candidates(inst, group, w, target, tgroup_order, tw):
    """Given the voter bijection, map candidates class by class or return None."""
    dom = _embedding_domain(inst, group, w)
    tdom = _embedding_domain(target, tgroup_order, tw)

    def signature(ballots, voters, c, committee):
        return tuple(ballots[v] >> c & 1 for v in voters), committee >> c & 1

    src: dict = {}
    for c in members_of(dom):
        src.setdefault(signature(inst.masks, group, c, w), []).append(c)
    tgt: dict = {}
    # candidates by descending support inside the target group
    order = sorted(members_of(tdom),
                   key=lambda c: (-sum(target.masks[v] >> c & 1 for v in tgroup_order), c))
    for c in order:
        tgt.setdefault(signature(target.masks, tgroup_order, c, tw), []).append(c)
    cmap = {}
    for sig, cands in src.items():
        pool = tgt.get(sig, [])
        if len(pool) < len(cands):
            return None
        cmap.update(zip(cands, pool))
    if mask_of(cmap[c] for c in members_of(w)) != tw:
        return None  # committee must map onto the target committee
    return cmap


def find_local_embedding(inst: Instance, group, committee, target: Instance, target_group,
                         target_committee, max_nodes: int = 10**6) -> LocalEmbedding | None:
    """Backtracking over voter bijections; candidates are then matched by class."""
    group = sorted(group, key=lambda i: (-inst.masks[i].bit_count(), i))
    tgroup = sorted(target_group)
    if len(group) != len(tgroup):
        raise WitnessError("groups must have equal size")
    w, tw = mask_of(committee), mask_of(target_committee)
    if w.bit_count() != tw.bit_count():
        return None
    dom = _embedding_domain(inst, group, w)
    tdom = _embedding_domain(target, tgroup, tw)
    if dom.bit_count() > tdom.bit_count():
        return None
    nodes = 0
    assign: dict = {}
    used: set = set()

    def compatible(i, j):
        a, b = inst.masks[i], target.masks[j]
        return ((a & w).bit_count() == (b & tw).bit_count()
                and (a & dom).bit_count() <= (b & tdom).bit_count())

    def extend(pos):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise WitnessError("embedding search exceeded its node bound")
        if pos == len(group):
            order = [assign[i] for i in group]
            cmap = _match_candidates(inst, group, w, target, order, tw)
            if cmap is None:
                return None
            return LocalEmbedding(dict(assign), cmap)
        i = group[pos]
        for j in tgroup:
            if j in used or not compatible(i, j):
                continue
            assign[i] = j
            used.add(j)
            found = extend(pos + 1)
            if found is not None:
                return found
            del assign[i]
            used.discard(j)
        return None

    return extend(0)


def embedding_exists_bruteforce(inst: Instance, group, committee, target: Instance,
                                target_group, target_committee) -> bool:
    """All voter bijections times all candidate injections (small cases only)."""
    group, tgroup = sorted(group), sorted(target_group)
    w, tw = mask_of(committee), mask_of(target_committee)
    dom = members_of(_embedding_domain(inst, group, w))
    tdom = members_of(_embedding_domain(target, tgroup, tw))
    for vperm in permutations(tgroup):
        vm = dict(zip(group, vperm))
        for image in permutations(tdom, len(dom)):
            emb = LocalEmbedding(vm, dict(zip(dom, image)))
            if check_local_embedding(inst, group, members_of(w), target, tgroup,
                                     members_of(tw), emb):
                return True
    return False


# -- witness-level properties -----------------------------------------------------


def check_cohesiveness_based(notion, inst: Instance, committee: Iterable[int]) -> bool:
    """Every natural witness shares an approved candidate outside the committee."""
    w = committee_mask(inst, committee)
    p = Profile.of(inst)
    return all(p.inter[x] & ~w for x in natural_witness_masks(notion, p, w))


def non_cohesive_witness(notion, p: Profile, w: int) -> int | None:
    for x in natural_witness_masks(notion, p, w):
        if not p.inter[x] & ~w:
            return x
    return None


def discontent_profile(masks, group: int, j: int) -> tuple[int, ...]:
    """Every member of ``group`` adopts voter ``j``'s ballot."""
    return tuple(masks[j] if group >> i & 1 else b for i, b in enumerate(masks))


def discontentment_failure(notion, p: Profile, w: int, x: int) -> int | None:
    """A member j whose ballot, adopted by the whole group, dissolves the witness."""
    for j in members_of(x):
        q = Profile(p.m, p.k, discontent_profile(p.masks, x, j))
        if not witness_predicate(notion, q, w, x):
            return j
    return None


def check_individual_discontentment(notion, inst: Instance, committee: Iterable[int],
                                    group: Iterable[int]) -> bool:
    w = committee_mask(inst, committee)
    p = Profile.of(inst)
    x = mask_of(group)
    if not witness_predicate(notion, p, w, x):
        raise WitnessError("group is not a natural witness")
    return discontentment_failure(notion, p, w, x) is None


@dataclass(frozen=True)
class MergeVerdict:
    status: str  # "true", "false" or "exhausted"
    failing_profile: tuple[frozenset[int], ...] | None = None
    profiles_checked: int = 0

    def __bool__(self) -> bool:
        return self.status == "true"


def check_merge_proofness(notion, inst: Instance, committee: Iterable[int],
                          group: Iterable[int], budget: int = MERGE_ENUMERATION_CAP,
                          seed: int = 0) -> MergeVerdict:
    """Grow members' ballots inside the group's union and re-check the witness.

    Enumerates every admissible profile when there are at most ``budget`` of
    them; otherwise samples ``budget`` of them and reports "exhausted" when
    no failure turns up, since a sample cannot prove the universal claim.
    """
    notion = NotionId.parse(notion)
    w = committee_mask(inst, committee)
    p = Profile.of(inst)
    x = mask_of(group)
    if not witness_predicate(notion, p, w, x):
        raise WitnessError("group is not a natural witness")
    members = members_of(x)
    pool = p.union[x]
    extras = [members_of(pool & ~p.masks[i]) for i in members]
    total = 1
    for e in extras:
        total <<= len(e)

    def check(choice) -> MergeVerdict | None:
        masks = list(p.masks)
        for i, e, bits in zip(members, extras, choice):
            masks[i] |= mask_of(c for c, b in zip(e, bits) if b)
        q = Profile(p.m, p.k, tuple(masks))
        if not witness_predicate(notion, q, w, x):
            return MergeVerdict("false", tuple(frozenset(members_of(b)) for b in masks))
        return None

    if total <= budget:
        spaces = [product((0, 1), repeat=len(e)) for e in extras]
        count = 0
        for choice in product(*[list(s) for s in spaces]):
            count += 1
            bad = check(choice)
            if bad is not None:
                return MergeVerdict(bad.status, bad.failing_profile, count)
        return MergeVerdict("true", None, count)
    rng = random.Random(seed)
    for count in range(1, budget + 1):
        choice = [tuple(rng.randrange(2) for _ in e) for e in extras]
        bad = check(choice)
        if bad is not None:
            return MergeVerdict(bad.status, bad.failing_profile, count)
    return MergeVerdict("exhausted", None, budget)


def merge_failure_single_step(notion, p: Profile, w: int, x: int) -> tuple[int, int] | None:
    """(voter, candidate) whose single added approval inside the union breaks the witness."""
    pool = p.union[x]
    for i in members_of(x):
        for c in members_of(pool & ~p.masks[i]):
            masks = list(p.masks)
            masks[i] |= 1 << c
            if not witness_predicate(notion, Profile(p.m, p.k, tuple(masks)), w, x):
                return i, c
    return None


# -- output -----------------------------------------------------------------------


def witness_jsonl(notion, inst: Instance, committee: Iterable[int]) -> str:
    """One JSON object per natural witness: notion, group, ell, anchors."""
    notion = NotionId.parse(notion)
    w = committee_mask(inst, committee)
    p = Profile.of(inst)
    lines = []
    for x in natural_witness_masks(notion, p, w):
        lines.append(json.dumps({
            "notion": notion.value,
            "group": [i + 1 for i in members_of(x)],
            "ell": _hare_ell(p, x),
            "anchors": [c + 1 for c in members_of(p.inter[x] & ~w)],
        }))
    return "\n".join(lines) + ("\n" if lines else "")
