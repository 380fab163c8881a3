import time

import pytest

from abcprop.corpus import (
    EXPECTED,
    FINGERPRINT_ROWS,
    Fact,
    Fixture,
    FixtureError,
    fact_count,
    fingerprint,
    fixture,
    fixture_names,
    fixture_path,
    load_fixture_instance,
    replay_all,
    replay_fixture,
)
from abcprop.notions import TABLE_NOTIONS, NotionId
from abcprop.oracle import InstanceFamily


def test_replay_all_passes():
    start = time.monotonic()
    results = replay_all()
    assert time.monotonic() - start < 10
    assert len(results) == fact_count() >= 25
    assert [r.line() for r in results if not r.passed] == []


def test_every_fixture_file_has_a_header_comment():
    names = fixture_names()
    assert {"fig2", "fig12", "price_100v1"} <= set(names)
    for name in names:
        with open(fixture_path(name), encoding="utf-8") as fh:
            assert fh.readline().startswith(f"# {name}: ")
        assert load_fixture_instance(name).n >= 1


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        fixture("fig99")
    with pytest.raises(FixtureError):
        load_fixture_instance("fig99")


def test_wrong_claims_fail():
    base = fixture("fig3")
    flipped = Fixture("fig3", base.instance, base.committee, (
        Fact("ejr+", base.committee, "satisfied"),
        Fact("pjr+", base.committee, "violated", "witness={1}, ell=1, c=c1"),
        Fact("jr", (0, 1), "satisfied"),
    ))
    results = replay_fixture(flipped)
    assert [r.passed for r in results] == [False, False, False]
    assert results[2].observed.startswith("error: ModelError")
    assert results[0].line().startswith("FAIL\tfig3\tejr+\texpected=satisfied\tobserved=violated")


def test_fig9_overlap_claim_is_a_violation():
    r = [r for r in replay_fixture("fig9") if r.fact.subject == "overlap-pjr" and not r.fact.edit][0]
    assert r.passed and r.observed == "violated; witness={2}, ell=1, C'={c1,c2}"


def test_expected_grid_shape():
    assert [r for r, _ in FINGERPRINT_ROWS] == list(EXPECTED)
    assert all(len(v) == len(TABLE_NOTIONS) for v in EXPECTED.values())


def test_small_fingerprint_slice():
    table = fingerprint(InstanceFamily(3, 4, 3), InstanceFamily(2, 3, 2),
                        notions=[NotionId.PJR, NotionId.EJR_PLUS, NotionId.PRICEABLE],
                        rows=["monotonicity", "rfsv"])
    assert table.mark("monotonicity", "pjr") == "✗"
    assert table.mark("monotonicity", "ejr+") == "✓"
    assert table.mark("rfsv", "priceable") == "✗"
    assert table.mismatches() == [] and table.unreplayed() == []
    assert "PJR" in table.grid(["monotonicity"], [NotionId.PJR])
    assert table.tsv().splitlines()[0] == "row\tnotion\tmark\texpected\tsource\tevidence"
