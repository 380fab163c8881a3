from fractions import Fraction
from itertools import combinations

import pytest

from abcprop.model import ModelError, NotPartyListError
from abcprop.notions import (
    TABLE_NOTIONS,
    NotionId,
    Profile,
    SubsetBoundError,
    check_price_system,
    pjrp_closure_values,
    priceability_lp,
    replay_witness,
    satisfying_committees,
    verify,
    verify_ejrp_fast,
    verify_pjrp_fast,
    verify_priceable,
)
from abcprop.flowlp import check_point, lp_feasible
from abcprop.oracle import InstanceFamily, verify_bruteforce

from conftest import make

W3 = (0, 2, 3, 4, 5, 6)


def fig(name):
    from abcprop.corpus import load_fixture_instance

    return load_fixture_instance(name)


def test_parse_ids():
    assert NotionId.parse("EJR+") is NotionId.EJR_PLUS
    assert NotionId.parse("ejr_plus") is NotionId.EJR_PLUS
    assert NotionId.parse("pjrplus") is NotionId.PJR_PLUS
    with pytest.raises(ValueError):
        NotionId.parse("nope")
    assert len(TABLE_NOTIONS) == 11


def test_fig3_classical_vs_plus(fig3):
    assert verify("pjr", fig3, W3).satisfied
    assert verify("ejr", fig3, W3).satisfied
    res = verify("ejr+", fig3, W3)
    assert res.describe() == "violated; witness={1,2}, ell=3, c=c2"
    assert replay_witness(fig3, W3, res.witness)


def test_fast_paths_report_same_witness(fig3):
    assert verify_ejrp_fast(fig3, W3).witness.group == frozenset({0, 1})
    w = verify_pjrp_fast(fig3, W3).witness
    assert (w.group, w.ell, w.anchors) == (frozenset({0, 1}), 3, frozenset({1}))


def test_pjrp_closure_value_fig2():
    inst = fig("fig2")
    values = pjrp_closure_values(inst, (3, 4, 5, 6))
    # voters 1,2 earn k=4 each and approve no winner
    assert values[0].value == 8 and values[2].value == 4


def test_fig8_npr_average():
    res = verify("npr", fig("fig8"), (1, 2, 3, 4))
    assert res.witness.average == Fraction(5, 2)
    assert res.witness.ell == 4
    assert verify("ejr+", fig("fig8"), (1, 2, 3, 4)).satisfied


def test_fig12_core_deviation():
    res = verify("core", fig("fig12"), (0, 1, 2))
    assert res.witness.group == frozenset(range(6))
    assert res.witness.anchors == frozenset({3, 4, 5})
    assert res.witness.ell == 3


def test_priceability_certificate_fig11():
    inst = fig("fig11")
    ok, system = verify_priceable(inst, (0, 1, 2))
    assert ok and system.budget > 0
    assert check_price_system(inst, (0, 1, 2), system)
    lp = priceability_lp(inst, (0, 1, 2))
    point = lp_feasible(lp)
    assert point is not None and check_point(lp, point)


def test_priceability_budget_four_certificate_fig11():
    # B=4: voters 1,2,3 pay 1 for c2, c1, c3
    from abcprop.notions import PriceSystem

    system = PriceSystem(Fraction(4), {(0, 1): Fraction(1), (1, 0): Fraction(1),
                                       (2, 2): Fraction(1)})
    assert check_price_system(fig("fig11"), (0, 1, 2), system)
    assert not check_price_system(fig("fig11"), (0, 1, 2),
                                  PriceSystem(Fraction(3), system.payments))


def test_price_100_vs_1_infeasible():
    inst = fig("price_100v1")
    ok, system = verify_priceable(inst, (0, 2))
    assert not ok and system is None
    assert verify_priceable(inst, (0, 1))[0]


def test_droop_two_parties():
    inst = fig("droop_3v2")
    assert verify("lq", inst, (0, 1)).satisfied
    res = verify("droop-ejr+", inst, (0, 1))
    assert not res.satisfied and res.witness.group == frozenset({3, 4})
    assert verify("ejr+", inst, (0, 1)).satisfied


def test_lq_requires_party_list(fig3):
    with pytest.raises(NotPartyListError):
        verify("lq", fig3, W3)


def test_subset_notions_refuse_huge_instances():
    inst = fig("price_100v1")
    assert verify("ejr+", inst, (0, 2)).satisfied
    with pytest.raises(SubsetBoundError):
        verify("pjr", inst, (0, 2))


def test_bad_committee(fig3):
    with pytest.raises(ModelError):
        verify("ejr+", fig3, (0, 1))


def test_universal_and_empty(fig3):
    assert verify("universal", fig3, W3).satisfied
    assert not verify("empty", fig3, W3).satisfied


def test_satisfying_committees_fig10_matches_lower_quota():
    inst = fig("fig10")
    found = satisfying_committees("ejr+", inst)
    expect = [frozenset(w) for w in combinations(range(6), 4)
              if len(set(w) & {0, 1, 2}) == 2]
    assert sorted(map(sorted, found)) == sorted(map(sorted, expect))


@pytest.mark.parametrize("notion", [n for n in NotionId if n is not NotionId.PRICEABLE])
def test_fast_matches_bruteforce_small_family(notion):
    """Every production verifier against the definition-literal oracle."""
    fam = InstanceFamily(3, 4, 2)
    for inst, w in fam.pairs():
        committee = [c for c in range(inst.m) if w >> c & 1]
        try:
            fast = verify(notion, inst, committee)
        except NotPartyListError:
            with pytest.raises(NotPartyListError):
                verify_bruteforce(notion, inst, committee)
            continue
        assert fast.satisfied == verify_bruteforce(notion, inst, committee), (inst, committee)
        if not fast.satisfied and notion is not NotionId.EMPTY:
            assert replay_witness(inst, committee, fast.witness)


def test_priceable_matches_fourier_motzkin_oracle():
    fam = InstanceFamily(3, 4, 2)
    checked = 0
    for inst, w in fam.pairs():
        if inst.n * inst.m > 9:
            continue
        committee = [c for c in range(inst.m) if w >> c & 1]
        assert verify("priceable", inst, committee).satisfied == verify_bruteforce(
            "priceable", inst, committee)
        checked += 1
    assert checked > 500


def test_profile_caches_subset_tables():
    inst = make(3, 1, {1}, {1, 2})
    p = Profile.of(inst)
    assert p is Profile.of(inst)
    assert p.size[0b11] == 2 and p.inter[0b11] == 0b1 and p.union[0b11] == 0b11
