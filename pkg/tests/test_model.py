from fractions import Fraction

import pytest

from abcprop.model import (
    Instance,
    ModelError,
    NotPartyListError,
    Quota,
    as_committee,
    committee_mask,
    format_candidates,
    format_voters,
    is_droop_large,
    is_large,
    lower_quota_seats,
    parse_committee,
    parse_instance,
    party_list_structure,
    restrict_candidates,
    satisfies_lower_quota,
    serialize_instance,
    support,
)

from conftest import make


def test_parse_header_and_ballots(fig3):
    inst = parse_instance("4 7 6\n0 1 2\n0 1\n3 4 5 6\n3 4 5 6")
    assert (inst.n, inst.m, inst.k) == (4, 7, 6)
    assert inst == fig3


def test_parse_skips_comments_and_allows_empty_ballots():
    inst = parse_instance("# two voters\n2 3 1\n\n0 2\n")
    assert inst.ballots == (frozenset(), frozenset({0, 2}))


@pytest.mark.parametrize("text", [
    "",
    "2 3\n0\n1",
    "2 3 1\n0",
    "1 3 1\n3",
    "1 3 1\n0 0",
    "1 2 3\n0",
    "1 3 1\nx",
    "1 3 1\n0\n1",
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ModelError):
        parse_instance(text)


def test_serialize_round_trip(fig3):
    assert parse_instance(serialize_instance(fig3, ["note"])) == fig3


def test_committee_validation(fig3):
    assert committee_mask(fig3, [0, 2, 3, 4, 5, 6]) == 0b1111101
    assert as_committee(fig3, [6, 5, 4, 3, 2, 0]) == frozenset({0, 2, 3, 4, 5, 6})
    for bad in ([0, 1], [0, 0, 2, 3, 4, 5], [0, 2, 3, 4, 5, 7]):
        with pytest.raises(ModelError):
            committee_mask(fig3, bad)
    assert parse_committee("0, 2 3\n") == (0, 2, 3)


def test_quota_tests_are_exact():
    assert Quota.hare(5, 3).value == Fraction(5, 3)
    assert Quota.hare(4, 2).is_large(2, 1) and not Quota.hare(4, 2).is_large(3, 2)
    # Droop is strict: 2 voters of 5 with k=2 exceed 5/3
    assert Quota.droop(5, 2).is_large(2, 1)
    assert is_droop_large(2, 1, 5, 2) and not is_large(2, 1, 5, 2)
    assert is_large(2, 3, 4, 6) and not is_large(2, 4, 4, 6)


def test_support(fig3):
    assert support(fig3, 1) == frozenset({0, 1})
    with pytest.raises(ModelError):
        support(fig3, 9)


def test_party_list_detection(fig3):
    assert party_list_structure(fig3) is None
    reduced, index = restrict_candidates(fig3, [0, 1, 3, 4, 5, 6])
    s = party_list_structure(reduced)
    assert s.parties == (frozenset({0, 1}), frozenset({2, 3, 4, 5}))
    assert s.party_sizes == (2, 2)
    assert index[3] == 2


def test_party_list_empty_ballot_rejected():
    assert party_list_structure(make(3, 1, {1}, set())) is None


def test_unapproved_candidates_form_a_voterless_party():
    s = party_list_structure(make(3, 1, {1}, {1}))
    assert s.parties == (frozenset({0}), frozenset({1, 2}))
    assert lower_quota_seats(s, 1) == (1, 0)


def test_lower_quota_fig10():
    inst = make(6, 4, {1, 2, 3}, {1, 2, 3}, {4, 5, 6}, {4, 5, 6})
    s = party_list_structure(inst)
    assert lower_quota_seats(s, 4) == (2, 2)
    assert not satisfies_lower_quota(inst, [0, 1, 2, 3])
    assert satisfies_lower_quota(inst, [0, 1, 3, 4])


def test_lower_quota_needs_party_list(fig3):
    with pytest.raises(NotPartyListError):
        satisfies_lower_quota(fig3, [0, 2, 3, 4, 5, 6])


def test_lower_quota_caps_at_party_size():
    inst = make(4, 3, {1}, {1}, {1}, {2, 3, 4})
    assert lower_quota_seats(party_list_structure(inst), 3) == (1, 0)


def test_instance_invariants():
    with pytest.raises(ModelError):
        Instance(2, 3, (frozenset(),))
    with pytest.raises(ModelError):
        Instance(2, 1, ())
    with pytest.raises(ModelError):
        Instance(2, 1, (frozenset({2}),))


def test_canonical_key_ignores_voter_order():
    a = make(3, 1, {1}, {2, 3})
    b = make(3, 1, {2, 3}, {1})
    assert a != b and a.canonical_key() == b.canonical_key()


def test_labels():
    assert format_voters([1, 0]) == "{1,2}"
    assert format_candidates([3, 4]) == "{c4,c5}"
