"""Committee rules used to drive property tests: equal shares, exhaustive PAV."""

from __future__ import annotations

import enum
import random
from fractions import Fraction
from itertools import combinations
from math import lcm

from .model import Instance, ModelError, mask_of
from .notions import NotionId, satisfying_committees


class RuleId(str, enum.Enum):
    MES = "mes"
    PAV = "pav"

    def __str__(self) -> str:
        return self.value


def mes(inst: Instance) -> tuple[int, ...]:
    """Method of Equal Shares with exact budgets, completed greedily.

    Each voter starts with k/n; a candidate costs 1. Each round buys the
    candidate whose supporters can fund it at the smallest per-voter cap
    (lowest index on ties). When nothing is affordable, remaining seats go
    to the highest approval scores, again lowest index first.
    """
    n, k = inst.n, inst.k
    budget = [Fraction(k, n)] * n
    supporters = [[i for i in range(n) if inst.masks[i] >> c & 1] for c in range(inst.m)]
    chosen: list[int] = []
    while len(chosen) < k:
        best = None
        for c in range(inst.m):
            if c in chosen:
                continue
            rho = _min_cap(sorted(budget[i] for i in supporters[c]))
            if rho is not None and (best is None or rho < best[0]):
                best = (rho, c)
        if best is None:
            break
        rho, c = best
        chosen.append(c)
        for i in supporters[c]:
            budget[i] -= min(budget[i], rho)
    if len(chosen) < k:
        rest = sorted((c for c in range(inst.m) if c not in chosen),
                      key=lambda c: (-len(supporters[c]), c))
        chosen.extend(rest[:k - len(chosen)])
    return tuple(sorted(chosen))


def _min_cap(budgets: list[Fraction]) -> Fraction | None:
    """Smallest rho with sum(min(b, rho)) == 1, or None if unaffordable."""
    remaining = Fraction(1)
    count = len(budgets)
    for idx, b in enumerate(budgets):
        share = remaining / (count - idx)
        if b >= share:
            return share
        remaining -= b
    return None


def pav_score(inst: Instance, committee) -> Fraction:
    w = mask_of(committee)
    return sum((_harmonic((b & w).bit_count()) for b in inst.masks), Fraction(0))


def _harmonic(t: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, t + 1)), Fraction(0))


def pav_exhaustive(inst: Instance, work_bound: int = 10**7) -> tuple[int, ...]:
    """Harmonic-score maximiser over all k-subsets; first in lexicographic order wins.

    Scores are scaled by lcm(1..k) so the comparison runs on exact integers.
    """
    m, k = inst.m, inst.k
    count = 1
    for j in range(k):
        count = count * (m - j) // (j + 1)
    if count * inst.n > work_bound:
        raise ModelError(f"{count} committees exceed the PAV work bound")
    scale = lcm(*range(1, k + 1))
    weights = [0]
    for t in range(1, k + 1):
        weights.append(weights[-1] + scale // t)
    best, best_score = None, -1
    for ws in combinations(range(m), k):
        w = mask_of(ws)
        score = sum(weights[(b & w).bit_count()] for b in inst.masks)
        if score > best_score:
            best, best_score = ws, score
    return best


def first_satisfying(notion, inst: Instance) -> tuple[int, ...] | None:
    """Lexicographically first committee satisfying ``notion``."""
    found = satisfying_committees(NotionId.parse(notion), inst)
    return tuple(sorted(min(found, key=sorted))) if found else None


def run_rule(rule: str, inst: Instance) -> tuple[int, ...]:
    """Dispatch by name: "mes", "pav", or "first:<notion>"."""
    if rule == RuleId.MES:
        return mes(inst)
    if rule == RuleId.PAV:
        return pav_exhaustive(inst)
    if rule.startswith("first:"):
        out = first_satisfying(rule.split(":", 1)[1], inst)
        if out is None:
            raise ModelError(f"no committee satisfies {rule.split(':', 1)[1]}")
        return out
    raise ModelError(f"unknown rule {rule!r}")


def random_instance(n: int, m: int, k: int, p: float, seed: int,
                    require_nonempty: bool = False, max_tries: int = 1000) -> Instance:
    """Independent approvals with probability ``p``; fixed output per seed."""
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise ModelError(f"invalid shape n={n}, m={m}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ModelError(f"approval probability {p} outside [0, 1]")
    rng = random.Random(seed)
    for _ in range(max_tries):
        masks = [mask_of(c for c in range(m) if rng.random() < p) for _ in range(n)]
        if not require_nonempty or any(masks):
            return Instance.from_masks(m, k, masks)
    raise ModelError("could not draw a profile with a nonempty ballot")


def describe_committee(committee) -> str:
    return " ".join(str(c) for c in sorted(committee))


__all__ = [
    "RuleId",
    "mes",
    "pav_exhaustive",
    "pav_score",
    "first_satisfying",
    "run_rule",
    "random_instance",
    "describe_committee",
]
