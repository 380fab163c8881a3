"""Definition-literal reference deciders and exhaustive instance families.

Nothing here shares code with the fast verifiers in :mod:`abcprop.notions`.
Each decider walks every quantifier of its definition (all voter groups,
all candidate sets, all seat demands) so it can serve as ground truth.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Callable, Iterable, Iterator

from .flowlp import RationalLP, fourier_motzkin_feasible
from .model import Instance, committee_mask, mask_of, members_of, party_list_structure
from .notions import NotionId, Profile, verify_mask

DEFAULT_WORK_BOUND = 10**8


class WorkBoundExceeded(RuntimeError):
    """The reference decider would need more evaluations than allowed."""


# -- brute-force deciders --------------------------------------------------------


def _subsets(n: int) -> range:
    return range(1, 1 << n)


def _pop(x: int) -> int:
    return x.bit_count()


class _Brute:
    """All quantities recomputed from raw ballots for one (instance, committee)."""

    def __init__(self, inst: Instance, w: int):
        self.inst = inst
        self.n, self.m, self.k = inst.n, inst.m, inst.k
        self.ballots = inst.masks
        self.w = w

    def members(self, x: int) -> list[int]:
        return [self.ballots[i] for i in members_of(x)]

    def large(self, x: int, ell: int) -> bool:
        return _pop(x) * self.k >= ell * self.n

    def common(self, x: int) -> int:
        out = (1 << self.m) - 1
        for b in self.members(x):
            out &= b
        return out

    def covered(self, x: int) -> int:
        out = 0
        for b in self.members(x):
            out |= b & self.w
        return out

    def utils(self, x: int) -> list[int]:
        return [_pop(b & self.w) for b in self.members(x)]

    def supporters(self, c: int) -> int:
        return mask_of(i for i, b in enumerate(self.ballots) if b >> c & 1)

    def losers(self) -> list[int]:
        return [c for c in range(self.m) if not self.w >> c & 1]


def _cohesive_rule(q: _Brute, test: Callable[[int, int], bool], same_w: bool = False) -> bool:
    for ell in range(1, q.k + 1):
        for x in _subsets(q.n):
            if not q.large(x, ell) or _pop(q.common(x)) < ell:
                continue
            if same_w and len({b & q.w for b in q.members(x)}) != 1:
                continue
            if not test(x, ell):
                return False
    return True


def _plus_rule(q: _Brute, test: Callable[[int, int], bool],
               group_filter: Callable[[int, int], bool] | None = None,
               large: Callable[[int, int], bool] | None = None) -> bool:
    large = large or q.large
    for c in q.losers():
        nc = q.supporters(c)
        for ell in range(1, q.k + 1):
            for x in _subsets(q.n):
                if x & ~nc or not large(x, ell):
                    continue
                if group_filter is not None and not group_filter(x, c):
                    continue
                if not test(x, ell):
                    return False
    return True


def _some_member_reaches(q: _Brute) -> Callable[[int, int], bool]:
    return lambda x, ell: max(q.utils(x)) >= ell


def _union_reaches(q: _Brute) -> Callable[[int, int], bool]:
    return lambda x, ell: _pop(q.covered(x)) >= ell


def _all_candidate_sets(m: int) -> range:
    return range(1, 1 << m)


def _core(q: _Brute) -> bool:
    for t in _all_candidate_sets(q.m):
        size = _pop(t)
        for x in _subsets(q.n):
            if _pop(x) * q.k < size * q.n:
                continue
            if all(_pop(b & t) > _pop(b & q.w) for b in q.members(x)):
                return False
    return True


def _fair(q: _Brute, pareto: bool) -> bool:
    for t in _all_candidate_sets(q.m):
        size = _pop(t)
        for beta in range(1, q.m + 1):
            for x in _subsets(q.n):
                if _pop(x) * q.k < size * q.n:
                    continue
                if any(_pop(b & t) < beta for b in q.members(x)):
                    continue
                if pareto:
                    if _pop(q.covered(x)) < beta:
                        return False
                elif max(q.utils(x)) < beta:
                    return False
    return True


def _subcore(q: _Brute) -> bool:
    for ell in range(1, q.k + 1):
        for x in _subsets(q.n):
            if not q.large(x, ell):
                continue
            for cs in _all_candidate_sets(q.m):
                if _pop(cs) > ell:
                    continue
                # A_i & C' must be a strict superset of A_i & W
                if all((b & q.w) & ~(b & cs) == 0 and (b & cs) != (b & q.w)
                       for b in q.members(x)):
                    return False
    return True


def _npr(q: _Brute) -> bool:
    def test(x, ell):
        return sum(q.utils(x)) > (ell - 1) * _pop(x)

    return _plus_rule(q, test)


def _lower_quota(q: _Brute) -> bool:
    structure = party_list_structure(q.inst)
    if structure is None:
        from .model import NotPartyListError

        raise NotPartyListError("lower quota is defined on party-list instances only")
    n = q.n
    for party, voters in zip(structure.parties, structure.party_voters):
        quota = min(q.k * len(voters) // n, len(party))
        if _pop(mask_of(party) & q.w) < quota:
            return False
    return True


def _pareto_dominated(q: _Brute) -> bool:
    for alt in combinations(range(q.m), q.k):
        am = mask_of(alt)
        if am & q.w:
            continue
        if all(_pop(b & am) > _pop(b & q.w) for b in q.ballots):
            return True
    return False


def _priceable(q: _Brute) -> bool:
    """C1-C5 with one payment variable per (voter, candidate) pair, via elimination."""
    n, m, w = q.n, q.m, q.w
    lp = RationalLP()
    lp.var("B", 0)
    for i in range(n):
        for c in range(m):
            lp.var(f"p{i}_{c}", 0, 1)
    for i, b in enumerate(q.ballots):
        for c in range(m):
            if not (b >> c & 1 and w >> c & 1):
                lp.add({f"p{i}_{c}": 1}, "==", 0)  # C1 and C4
        row = {f"p{i}_{c}": n for c in range(m)}
        row["B"] = -1
        lp.add(row, "<=", 0)  # C2
    for c in members_of(w):
        lp.add({f"p{i}_{c}": 1 for i in range(n)}, "==", 1)  # C3
    for c in q.losers():
        voters = members_of(q.supporters(c))
        if not voters:
            continue
        row = {"B": len(voters)}
        for i in voters:
            for d in range(m):
                row[f"p{i}_{d}"] = row.get(f"p{i}_{d}", 0) - n
        lp.add(row, "<=", n)  # C5 scaled by n
    return fourier_motzkin_feasible(lp)


def _dispatch(notion: NotionId, q: _Brute) -> bool:
    n, k, w = q.n, q.k, q.w
    reach_one = _some_member_reaches(q)
    reach_all = _union_reaches(q)
    if notion is NotionId.UNIVERSAL:
        return True
    if notion is NotionId.EMPTY:
        return False
    if notion is NotionId.JR:
        for x in _subsets(n):
            if q.large(x, 1) and q.common(x) and max(q.utils(x)) == 0:
                return False
        return True
    if notion is NotionId.PJR:
        return _cohesive_rule(q, reach_all)
    if notion is NotionId.EJR:
        return _cohesive_rule(q, reach_one)
    if notion is NotionId.OVERLAP_PJR:
        return _cohesive_rule(q, reach_all, same_w=True)
    if notion is NotionId.PJR_PLUS:
        return _plus_rule(q, reach_all)
    if notion is NotionId.EJR_PLUS:
        return _plus_rule(q, reach_one)
    if notion in (NotionId.WEAK_EJR_PLUS, NotionId.WEAK_PJR_PLUS):
        test = reach_one if notion is NotionId.WEAK_EJR_PLUS else reach_all
        return _plus_rule(q, test, lambda x, c: x == q.supporters(c))
    if notion in (NotionId.DIFF_EJR_PLUS, NotionId.DIFF_PJR_PLUS):
        test = reach_one if notion is NotionId.DIFF_EJR_PLUS else reach_all
        return _plus_rule(q, test, lambda x, c: len({b & ~w for b in q.members(x)}) == 1)
    if notion is NotionId.EQUAL_EJR_PLUS:
        return _plus_rule(q, reach_one, lambda x, c: len(set(q.utils(x))) == 1)
    if notion is NotionId.DROOP_EJR_PLUS:
        return _plus_rule(q, reach_one, large=lambda x, ell: _pop(x) * (k + 1) > ell * n)
    if notion is NotionId.EJR_PLUS_EX_PARETO:
        return _plus_rule(q, reach_one) and not _pareto_dominated(q)
    if notion is NotionId.CORE:
        return _core(q)
    if notion is NotionId.FJR:
        return _fair(q, pareto=False)
    if notion is NotionId.FPJR:
        return _fair(q, pareto=True)
    if notion is NotionId.SUBCORE:
        return _subcore(q)
    if notion is NotionId.NPR:
        return _npr(q)
    if notion is NotionId.PRICEABLE:
        return _priceable(q)
    if notion is NotionId.LQ_PARTY_LIST:
        return _lower_quota(q)
    raise ValueError(f"unknown notion {notion}")


def _work_estimate(notion: NotionId, n: int, m: int, k: int) -> int:
    groups = 1 << n
    if notion in (NotionId.CORE, NotionId.SUBCORE):
        return groups * (1 << m) * k * n
    if notion in (NotionId.FJR, NotionId.FPJR):
        return groups * (1 << m) * m * n
    if notion is NotionId.PRICEABLE:
        return (n * m) ** 3
    return groups * (m + 1) * k * n


def verify_bruteforce(notion, inst: Instance, committee: Iterable[int],
                      work_bound: int = DEFAULT_WORK_BOUND) -> bool:
    notion = NotionId.parse(notion)
    w = committee_mask(inst, committee)
    if _work_estimate(notion, inst.n, inst.m, inst.k) > work_bound:
        raise WorkBoundExceeded(
            f"{notion}: n={inst.n}, m={inst.m} exceeds the work bound {work_bound}"
        )
    return _dispatch(notion, _Brute(inst, w))


def enumerate_satisfying(notion, inst: Instance,
                         work_bound: int = DEFAULT_WORK_BOUND) -> set[frozenset[int]]:
    notion = NotionId.parse(notion)
    total = 0
    count = 1
    for j in range(inst.k):
        count = count * (inst.m - j) // (j + 1)
    total = count * _work_estimate(notion, inst.n, inst.m, inst.k)
    if total > work_bound:
        raise WorkBoundExceeded(f"{count} committees exceed the work bound {work_bound}")
    return {
        frozenset(ws)
        for ws in combinations(range(inst.m), inst.k)
        if verify_bruteforce(notion, inst, ws, work_bound)
    }


# -- instance families -----------------------------------------------------------


@dataclass(frozen=True)
class InstanceFamily:
    """All profiles up to the bounds (canonical up to voter order), or a seeded sample."""

    max_voters: int = 4
    max_candidates: int = 5
    max_k: int = 3
    mode: str = "exhaustive"  # or "random"
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown family mode {self.mode!r}")
        if min(self.max_voters, self.max_candidates, self.max_k) < 1:
            raise ValueError("family bounds must be positive")

    def shapes(self) -> Iterator[tuple[int, int, int]]:
        """(m, k, n) triples in canonical order."""
        for m in range(1, self.max_candidates + 1):
            for k in range(1, min(self.max_k, m) + 1):
                for n in range(1, self.max_voters + 1):
                    yield m, k, n

    def __iter__(self) -> Iterator[Instance]:
        if self.mode == "exhaustive":
            for m, k, n in self.shapes():
                for masks in combinations_with_replacement(range(1 << m), n):
                    yield Instance.from_masks(m, k, masks)
        else:
            rng = random.Random(self.seed)
            shapes = list(self.shapes())
            for _ in range(self.count):
                m, k, n = rng.choice(shapes)
                masks = sorted(rng.randrange(1 << m) for _ in range(n))
                yield Instance.from_masks(m, k, masks)

    def pairs(self) -> Iterator[tuple[Instance, int]]:
        """Every (instance, committee bitmask) pair."""
        for inst in self:
            for ws in combinations(range(inst.m), inst.k):
                yield inst, mask_of(ws)

    def label(self) -> str:
        base = f"n<={self.max_voters},m<={self.max_candidates},k<={self.max_k}"
        if self.mode == "random":
            return f"{base},random({self.count},seed={self.seed})"
        return base


def party_list_instances(family: InstanceFamily) -> Iterator[Instance]:
    for inst in family:
        if party_list_structure(inst) is not None:
            yield inst


# -- refinement ------------------------------------------------------------------


@dataclass(frozen=True)
class RefinementVerdict:
    finer: NotionId
    coarser: NotionId
    confirmed: bool
    instance: Instance | None = None
    committee: frozenset[int] | None = None
    checked_pairs: int = 0

    def describe(self) -> str:
        if self.confirmed:
            return f"{self.finer} <= {self.coarser}: confirmed on {self.checked_pairs} pairs"
        return (f"{self.finer} <= {self.coarser}: counterexample "
                f"W={sorted(self.committee)} on {self.instance}")


def _decider(mode: str):
    if mode == "fast":
        return lambda notion, inst, w: verify_mask(notion, Profile.of(inst), w) is None
    if mode == "bruteforce":
        return lambda notion, inst, w: verify_bruteforce(notion, inst, members_of(w))
    raise ValueError(f"unknown decider {mode!r}")


def _refinement_chunk(args):
    finer, coarser, insts, mode = args
    decide = _decider(mode)
    checked = 0
    for inst in insts:
        for ws in combinations(range(inst.m), inst.k):
            w = mask_of(ws)
            checked += 1
            if decide(finer, inst, w) and not decide(coarser, inst, w):
                return checked, (inst, frozenset(ws))
    return checked, None


def refinement_report(finer, coarser, family: InstanceFamily | Iterable[Instance],
                      decider: str = "fast", jobs: int = 1) -> RefinementVerdict:
    """First (I, W) with W satisfying ``finer`` but not ``coarser``, else confirm.

    ``decider`` picks the production verifiers ("fast") or the reference
    deciders ("bruteforce").
    """
    finer, coarser = NotionId.parse(finer), NotionId.parse(coarser)
    insts = list(family)
    chunks = [insts[i:i + 2000] for i in range(0, len(insts), 2000)]
    checked = 0
    for done, hit in parallel_map(_refinement_chunk,
                                  [(finer, coarser, ch, decider) for ch in chunks], jobs):
        checked += done
        if hit is not None:
            return RefinementVerdict(finer, coarser, False, hit[0], hit[1], checked)
    return RefinementVerdict(finer, coarser, True, checked_pairs=checked)


def parallel_map(fn, items, jobs: int = 1):
    """Ordered map; ``jobs > 1`` fans out to worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        for item in items:
            yield fn(item)
        return
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as pool:
        yield from pool.map(fn, items)


def refinement_tsv(verdicts: Iterable[RefinementVerdict], paths: dict | None = None) -> str:
    """Rows: finer, coarser, verdict, counterexample path."""
    paths = paths or {}
    lines = ["notionA\tnotionB\tverdict\tcounterexample"]
    for v in verdicts:
        verdict = "confirm" if v.confirmed else "counterexample"
        lines.append(f"{v.finer}\t{v.coarser}\t{verdict}\t{paths.get((v.finer, v.coarser), '-')}")
    return "\n".join(lines) + "\n"
