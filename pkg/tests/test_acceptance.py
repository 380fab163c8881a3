"""The eight acceptance criteria, each at its stated bound and tolerance."""

import random
import time
from itertools import combinations

from abcprop.axioms import coarsening_chain, pjr_violation_from_plus, refute_via_party_list
from abcprop.corpus import EXPECTED, fact_count, fingerprint, replay_all
from abcprop.flowlp import check_point, fourier_motzkin_feasible, lp_feasible
from abcprop.model import members_of, party_list_structure, satisfies_lower_quota
from abcprop.notions import (
    check_price_system,
    pjrp_closure_values,
    priceability_lp,
    verify,
    verify_ejrp_fast,
    verify_pjrp_fast,
    verify_priceable,
)
from abcprop.oracle import (
    InstanceFamily,
    enumerate_satisfying,
    party_list_instances,
    refinement_report,
    verify_bruteforce,
)
from abcprop.rules import mes, pav_exhaustive, random_instance
from abcprop.witness import check_local_embedding

FAMILY = InstanceFamily(4, 5, 3)

REQUIRED_FACTS = [
    ("fig3", "pjr", "satisfied", False), ("fig3", "ejr", "satisfied", False),
    ("fig3", "ejr+", "violated", False), ("fig3", "pjr", "violated", True),
    ("fig7", "ejr+", "satisfied", False), ("fig7", "priceable", "violated", False),
    ("fig8", "ejr+", "satisfied", False), ("fig8", "npr", "violated", False),
    ("fig12", "core", "violated", False), ("fig10", "jr", "satisfied", False),
    ("fig10", "lower-quota", "violated", False), ("price_100v1", "priceable", "violated", False),
    ("droop_3v2", "lq", "satisfied", False), ("droop_3v2", "droop-ejr+", "violated", False),
]


def test_1_fixture_replay(criterion):
    start = time.monotonic()
    results = replay_all()
    seconds = time.monotonic() - start
    failed = [r.line() for r in results if not r.passed]
    passed = {(r.fixture, r.fact.subject, r.fact.expected, bool(r.fact.edit))
              for r in results if r.passed}
    missing = [f for f in REQUIRED_FACTS if f not in passed]
    npr = [r for r in results if r.fixture == "fig8" and r.fact.subject == "npr"][0]
    core = [r for r in results if r.fixture == "fig12" and r.fact.subject == "core"][0]
    ok = (not failed and not missing and len(results) >= 25 and seconds < 10
          and "avg=5/2" in npr.observed and "C'={c4,c5,c6}" in core.observed)
    criterion(1, ok, f"{len(results) - len(failed)}/{len(results)} facts in {seconds:.1f}s")
    assert ok, (failed, missing)
    assert len(results) == fact_count()


def test_2_oracle_equivalence(criterion):
    start = time.monotonic()
    pairs = mismatches = 0
    for inst, w in FAMILY.pairs():
        committee = members_of(w)
        pairs += 1
        if verify_ejrp_fast(inst, committee).satisfied != verify_bruteforce(
                "ejr+", inst, committee):
            mismatches += 1
        if verify_pjrp_fast(inst, committee).satisfied != verify_bruteforce(
                "pjr+", inst, committee):
            mismatches += 1
    seconds = time.monotonic() - start
    ok = mismatches == 0 and pairs == 1544095 and seconds < 600
    criterion(2, ok, f"{pairs} pairs, {mismatches} mismatches, {seconds:.0f}s")
    assert ok


def test_3_party_list_coincidence(criterion):
    notions = ["pjr", "ejr", "pjr+", "ejr+", "core"]
    instances = mismatches = 0
    for inst in party_list_instances(FAMILY):
        instances += 1
        lq = {frozenset(ws) for ws in combinations(range(inst.m), inst.k)
              if satisfies_lower_quota(inst, ws)}
        for notion in notions:
            if enumerate_satisfying(notion, inst) != lq:
                mismatches += 1
    ok = instances > 0 and mismatches == 0
    criterion(3, ok, f"{instances} party-list instances x {len(notions)} notions, "
                     f"{mismatches} mismatches")
    assert ok


def test_4_refinement_lattice(criterion):
    holds = [("ejr+", "ejr"), ("ejr+", "pjr+"), ("pjr+", "pjr"), ("ejr", "pjr"),
             ("core", "ejr"), ("npr", "ejr+"), ("subcore", "pjr+"), ("subcore", "fpjr")]
    incomparable = [("ejr", "pjr+"), ("pjr+", "ejr")]
    bad = []
    for finer, coarser in holds:
        v = refinement_report(finer, coarser, FAMILY)
        if not v.confirmed:
            bad.append(v.describe())
    for finer, coarser in incomparable:
        v = refinement_report(finer, coarser, FAMILY)
        if v.confirmed or not (verify_bruteforce(finer, v.instance, v.committee)
                               and not verify_bruteforce(coarser, v.instance, v.committee)):
            bad.append(f"{finer} vs {coarser}: no valid counterexample")
    ok = not bad
    criterion(4, ok, f"{len(holds)} inclusions confirmed, {len(incomparable)} separations found"
              if ok else "; ".join(bad))
    assert ok, bad


def test_5_fingerprint(criterion):
    table = fingerprint(FAMILY)
    mismatches = table.mismatches()
    unreplayed = table.unreplayed()
    cells = len(table.cells)
    ok = (not mismatches and not unreplayed and table.seconds < 1800
          and cells == len(EXPECTED) * len(next(iter(EXPECTED.values()))))
    criterion(5, ok, f"{cells} cells, {len(mismatches)} mismatches, "
                     f"{len(unreplayed)} unreplayed, {table.seconds:.0f}s")
    assert ok, (mismatches, unreplayed, table.seconds)


def _violating_pairs(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n, m = rng.randint(2, 9), rng.randint(3, 8)
        k = rng.randint(1, m - 1)
        inst = random_instance(n, m, k, rng.choice([0.3, 0.5, 0.7]), rng.randrange(1 << 30))
        w = tuple(sorted(rng.sample(range(m), k)))
        res = verify("pjr+", inst, w)
        if not res.satisfied:
            out.append((inst, w, res.witness))
    return out


def _satisfied_groups(notion, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n, m = rng.randint(2, 9), rng.randint(3, 8)
        k = rng.randint(1, m - 1)
        inst = random_instance(n, m, k, rng.choice([0.3, 0.5, 0.7]), rng.randrange(1 << 30))
        w = tuple(sorted(rng.sample(range(m), k)))
        losers = [c for c in range(m) if c not in w]
        c = rng.choice(losers)
        supporters = [i for i in range(n) if inst.masks[i] >> c & 1]
        if not supporters or not verify(notion, inst, w).satisfied:
            continue
        group = tuple(sorted(rng.sample(supporters, rng.randint(1, len(supporters)))))
        out.append((inst, w, group))
    return out


def test_6_constructive_chains(criterion):
    failures = []
    for inst, w, wit in _violating_pairs(200, seed=6):
        chain = refute_via_party_list(inst, w, wit)
        if party_list_structure(chain.instance) is None or satisfies_lower_quota(
                chain.instance, chain.committee):
            failures.append(("refute", inst, w))
        if verify("pjr", pjr_violation_from_plus(inst, w, wit), w).satisfied:
            failures.append(("pjr-from-plus", inst, w))
    chains = 0
    for notion, seed in (("ejr+", 61), ("pjr+", 62)):
        for inst, w, group in _satisfied_groups(notion, 100, seed):
            chain = coarsening_chain(notion, inst, w, group)
            chains += 1
            src = chain.steps[0]
            if (party_list_structure(chain.instance) is None
                    or not satisfies_lower_quota(chain.instance, chain.committee)
                    or not check_local_embedding(src, group, w, chain.instance, group,
                                                 chain.committee, chain.embedding)):
                failures.append((f"coarsen-{notion}", inst, w, group))
    ok = not failures
    criterion(6, ok, f"200 violation chains, {chains} coarsening chains, "
                     f"{len(failures)} failures")
    assert ok, failures[:3]


def test_7_rule_properties(criterion):
    start = time.monotonic()
    rng = random.Random(7)
    mes_fail = 0
    for _ in range(1000):
        m = rng.randint(1, 12)
        k = rng.randint(1, min(6, m))
        inst = random_instance(rng.randint(1, 20), m, k, rng.uniform(0.1, 0.9),
                               rng.randrange(1 << 30))
        if not verify("ejr+", inst, mes(inst)).satisfied:
            mes_fail += 1
    pav_fail = checked = 0
    for inst in FAMILY:
        checked += 1
        if not verify("npr", inst, pav_exhaustive(inst)).satisfied:
            pav_fail += 1
    seconds = time.monotonic() - start
    ok = mes_fail == 0 and pav_fail == 0 and seconds < 900
    criterion(7, ok, f"MES EJR+ failures {mes_fail}/1000, PAV NPR failures "
                     f"{pav_fail}/{checked}, {seconds:.0f}s")
    assert ok


def _closure_by_enumeration(inst, w, c):
    """Best k*|S| - n*|W covered by S| over all supporter sets S of c."""
    supporters = [i for i in range(inst.n) if inst.masks[i] >> c & 1]
    best = 0
    for r in range(1, len(supporters) + 1):
        for group in combinations(supporters, r):
            covered = 0
            for i in group:
                covered |= inst.masks[i] & w
            best = max(best, inst.k * r - inst.n * covered.bit_count())
    return best


def test_8_exact_arithmetic(criterion):
    lp_solves = certificates = closures = 0
    problems = []
    for inst, w in InstanceFamily(3, 4, 3).pairs():
        committee = members_of(w)
        for c, res in pjrp_closure_values(inst, committee).items():
            closures += 1
            problems.append(res.cut_value + res.value == res.total_profit)
            problems.append(res.value == _closure_by_enumeration(inst, w, c))
        for by_ballot in (False, True):
            lp = priceability_lp(inst, committee, by_ballot=by_ballot)
            point = lp_feasible(lp)
            lp_solves += 1
            if point is not None:
                certificates += 1
                problems.append(check_point(lp, point))
            elif inst.n * inst.m <= 8:
                problems.append(not fourier_motzkin_feasible(lp))
        ok_price, system = verify_priceable(inst, committee)
        if ok_price:
            problems.append(check_price_system(inst, committee, system))
    ok = all(problems) and certificates > 0
    criterion(8, ok, f"{lp_solves} LP solves ({certificates} certificates), "
                     f"{closures} closure solves, {problems.count(False)} failed identities")
    assert ok
