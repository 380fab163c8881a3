import json
import random

import pytest

from abcprop.corpus import load_fixture_instance
from abcprop.model import Instance, NotPartyListError
from abcprop.notions import NotionId, Profile, verify_mask
from abcprop.oracle import InstanceFamily
from abcprop.witness import (
    NO_NATURAL_WITNESS,
    WitnessError,
    check_cohesiveness_based,
    check_individual_discontentment,
    check_local_embedding,
    check_merge_proofness,
    embedding_exists_bruteforce,
    find_local_embedding,
    is_natural_witness,
    merge_failure_single_step,
    natural_witnesses,
    witness_jsonl,
)

W3 = (0, 2, 3, 4, 5, 6)


def test_witness_exists_iff_violated():
    for inst, w in InstanceFamily(3, 3, 3).pairs():
        p = Profile.of(inst)
        for nid in NotionId:
            if nid in NO_NATURAL_WITNESS:
                continue
            try:
                ok = verify_mask(nid, p, w) is None
            except NotPartyListError:
                continue
            got = natural_witnesses(nid, inst, [c for c in range(inst.m) if w >> c & 1])
            assert ok == (not got.groups), (nid, inst, w)


def test_fig3_ejrp_witnesses(fig3):
    ws = natural_witnesses("ejr+", fig3, W3)
    assert frozenset({0, 1}) in ws.groups
    assert is_natural_witness("ejr+", fig3, W3, (0, 1))
    assert not is_natural_witness("ejr+", fig3, W3, (2, 3))
    with pytest.raises(WitnessError):
        is_natural_witness("ejr+", fig3, W3, (3, 4))


def test_no_witness_function_for_trivial_notions(fig3):
    with pytest.raises(WitnessError):
        natural_witnesses("universal", fig3, W3)


def test_jsonl_is_one_based(fig3):
    rows = [json.loads(x) for x in witness_jsonl("ejr+", fig3, W3).splitlines()]
    first = [r for r in rows if r["group"] == [1, 2]][0]
    assert first == {"notion": "ejr+", "group": [1, 2], "ell": 3, "anchors": [2]}


def test_fig4_embedding_one_way():
    inst = load_fixture_instance("fig4")
    emb = find_local_embedding(inst, (0, 1, 2), (0, 1, 2), inst, (3, 4, 5), (3, 4, 0))
    assert emb is not None
    assert check_local_embedding(inst, (0, 1, 2), (0, 1, 2), inst, (3, 4, 5), (3, 4, 0), emb)
    assert find_local_embedding(inst, (3, 4, 5), (3, 4, 0), inst, (0, 1, 2), (0, 1, 2)) is None


def test_embedding_search_matches_bruteforce():
    rng = random.Random(11)
    for _ in range(300):
        m, k = rng.randint(2, 4), rng.randint(1, 2)
        g = rng.randint(1, 2)
        src = Instance.from_masks(m, k, [rng.randrange(1 << m) for _ in range(g)])
        dst = Instance.from_masks(m, k, [rng.randrange(1 << m) for _ in range(g)])
        sw = tuple(rng.sample(range(m), k))
        dw = tuple(rng.sample(range(m), k))
        group = tuple(range(g))
        emb = find_local_embedding(src, group, sw, dst, group, dw)
        assert (emb is not None) == embedding_exists_bruteforce(src, group, sw, dst, group, dw)
        if emb is not None:
            assert check_local_embedding(src, group, sw, dst, group, dw, emb)


def test_cohesiveness_core_fig12():
    inst = load_fixture_instance("fig12")
    assert not check_cohesiveness_based("core", inst, (0, 1, 2))
    assert check_cohesiveness_based("ejr+", inst, (0, 1, 2))


def test_npr_individual_discontentment_fig8():
    inst = load_fixture_instance("fig8")
    w = (1, 2, 3, 4)
    group = sorted(natural_witnesses("npr", inst, w).groups, key=len)[-1]
    assert not check_individual_discontentment("npr", inst, w, group)
    with pytest.raises(WitnessError):
        check_individual_discontentment("npr", inst, w, ())


def test_ejr_merge_fig6():
    inst = load_fixture_instance("fig6")
    res = check_merge_proofness("ejr", inst, (0, 1, 2), (0, 1, 2, 3))
    assert res.status == "false" and not res
    p = Profile.of(inst)
    assert merge_failure_single_step("ejr", p, 0b111, 0b1111) is not None


def test_ejrp_merge_proof_fig3(fig3):
    res = check_merge_proofness("ejr+", fig3, W3, (0, 1))
    assert res.status == "true" and res.profiles_checked > 1


def test_merge_sampling_reports_exhausted(fig3):
    res = check_merge_proofness("ejr+", fig3, W3, (0, 1), budget=1)
    assert res.status == "exhausted"
