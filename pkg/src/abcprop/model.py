"""Election data model: instances, committees, quotas and party-list structure.

Ballots are stored twice: as frozensets for readability and as int bitmasks
(bit ``c`` set iff candidate ``c`` is approved) for the hot loops elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class ModelError(ValueError):
    """Malformed instance, committee or file content."""


class NotPartyListError(ModelError):
    """Raised when an operation needs a party-list instance."""


def mask_of(items: Iterable[int]) -> int:
    out = 0
    for x in items:
        out |= 1 << x
    return out


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """An approval election with ``m`` candidates ``0..m-1`` and committee size ``k``."""

    m: int
    k: int
    ballots: tuple[frozenset[int], ...]
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ModelError(f"committee size must be positive, got k={self.k}")
        if self.m < self.k:
            raise ModelError(f"need m >= k, got m={self.m}, k={self.k}")
        if not self.ballots:
            raise ModelError("an instance needs at least one voter")
        ballots = tuple(frozenset(b) for b in self.ballots)
        for i, b in enumerate(ballots):
            for c in b:
                if not 0 <= c < self.m:
                    raise ModelError(f"voter {i + 1} approves unknown candidate {c}")
        object.__setattr__(self, "ballots", ballots)
        object.__setattr__(self, "masks", tuple(mask_of(b) for b in ballots))

    @classmethod
    def from_masks(cls, m: int, k: int, masks: Sequence[int]) -> "Instance":
        return cls(m, k, tuple(frozenset(members_of(x)) for x in masks))

    @property
    def n(self) -> int:
        return len(self.ballots)

    @property
    def candidates(self) -> range:
        return range(self.m)

    def canonical_key(self) -> tuple:
        """Key identifying the instance up to voter permutation."""
        return (self.m, self.k, tuple(sorted(self.masks)))

    def with_masks(self, masks: Sequence[int]) -> "Instance":
        return Instance.from_masks(self.m, self.k, masks)


def committee_mask(inst: Instance, members: Iterable[int]) -> int:
    """Validate a committee and return its bitmask."""
    members = list(members)
    if len(set(members)) != len(members):
        raise ModelError("committee lists a candidate twice")
    for c in members:
        if not 0 <= c < inst.m:
            raise ModelError(f"committee member {c} is not a candidate")
    if len(members) != inst.k:
        raise ModelError(f"committee has {len(members)} members, expected k={inst.k}")
    return mask_of(members)


def as_committee(inst: Instance, members: Iterable[int]) -> frozenset[int]:
    return frozenset(members_of(committee_mask(inst, members)))


@dataclass(frozen=True)
class Quota:
    value: Fraction
    kind: str  # "hare" or "droop"

    @classmethod
    def hare(cls, n: int, k: int) -> "Quota":
        return cls(Fraction(n, k), "hare")

    @classmethod
    def droop(cls, n: int, k: int) -> "Quota":
        return cls(Fraction(n, k + 1), "droop")

    def is_large(self, group_size: int, ell: int) -> bool:
        """Does a group of this size deserve ``ell`` seats under the quota?"""
        if self.kind == "hare":
            return group_size >= ell * self.value
        return group_size > ell * self.value


def is_large(size: int, ell: int, n: int, k: int) -> bool:
    """Hare test ``size >= ell*n/k`` in integers."""
    return size * k >= ell * n


def is_droop_large(size: int, ell: int, n: int, k: int) -> bool:
    return size * (k + 1) > ell * n


def support(inst: Instance, c: int) -> frozenset[int]:
    if not 0 <= c < inst.m:
        raise ModelError(f"unknown candidate {c}")
    return frozenset(i for i, b in enumerate(inst.masks) if b >> c & 1)


@dataclass(frozen=True)
class PartyListStructure:
    parties: tuple[frozenset[int], ...]
    party_voters: tuple[frozenset[int], ...]

    @property
    def party_sizes(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.party_voters)


def party_list_structure(inst: Instance) -> PartyListStructure | None:
    """Parties in order of their smallest candidate, or None.

    Every ballot must be nonempty and distinct ballots must be disjoint.
    Candidates nobody approves form one trailing party without voters; its
    lower quota is zero.
    """
    seen: dict[int, list[int]] = {}
    for i, b in enumerate(inst.masks):
        if b == 0:
            return None
        seen.setdefault(b, []).append(i)
    covered = 0
    for b in seen:
        if covered & b:
            return None
        covered |= b
    order = sorted(seen, key=lambda b: (b & -b).bit_length())
    parties = [frozenset(members_of(b)) for b in order]
    voters = [frozenset(seen[b]) for b in order]
    rest = ((1 << inst.m) - 1) & ~covered
    if rest:
        parties.append(frozenset(members_of(rest)))
        voters.append(frozenset())
    return PartyListStructure(tuple(parties), tuple(voters))


def lower_quota_seats(structure: PartyListStructure, k: int) -> tuple[int, ...]:
    n = sum(structure.party_sizes)
    return tuple(
        min(k * nx // n, len(cx))
        for cx, nx in zip(structure.parties, structure.party_sizes)
    )


def satisfies_lower_quota(inst: Instance, committee: Iterable[int]) -> bool:
    structure = party_list_structure(inst)
    if structure is None:
        raise NotPartyListError("instance is not a party-list instance")
    w = frozenset(committee)
    seats = lower_quota_seats(structure, inst.k)
    return all(len(w & cx) >= q for cx, q in zip(structure.parties, seats))


def restrict_candidates(
    inst: Instance, keep: Iterable[int]
) -> tuple[Instance, dict[int, int]]:
    """Restrict to ``keep`` and relabel it as ``0..|keep|-1`` in ascending order.

    Returns the new instance and the map old index -> new index.
    """
    keep = sorted(set(keep))
    for c in keep:
        if not 0 <= c < inst.m:
            raise ModelError(f"unknown candidate {c}")
    if len(keep) < inst.k:
        raise ModelError(f"restriction keeps {len(keep)} < k={inst.k} candidates")
    index = {c: j for j, c in enumerate(keep)}
    ballots = tuple(frozenset(index[c] for c in b if c in index) for b in inst.ballots)
    return Instance(len(keep), inst.k, ballots), index


def restrict_masks(masks: Sequence[int], keep_mask: int, m: int) -> tuple[int, ...]:
    """Bitmask version of :func:`restrict_candidates` (ascending relabel)."""
    positions = [c for c in range(m) if keep_mask >> c & 1]
    out = []
    for b in masks:
        x = 0
        for j, c in enumerate(positions):
            if b >> c & 1:
                x |= 1 << j
        out.append(x)
    return tuple(out)


# -- file format -------------------------------------------------------------


def parse_instance(text: str) -> Instance:
    lines = [ln.rstrip("\r") for ln in text.split("\n")]
    body = [ln for ln in lines if not ln.lstrip().startswith("#")]
    if not body or not body[0].strip():
        raise ModelError("missing header line 'n m k'")
    tokens = body[0].split()
    if len(tokens) != 3 or not all(t.isdigit() for t in tokens):
        raise ModelError(f"malformed header {body[0]!r}")
    n, m, k = (int(t) for t in tokens)
    if n < 1:
        raise ModelError("header declares no voters")
    rows = body[1:]
    if len(rows) < n:
        raise ModelError(f"header declares {n} voters, file has {len(rows)} ballot lines")
    if any(r.strip() for r in rows[n:]):
        raise ModelError("trailing content after the last ballot")
    if m < k:
        raise ModelError(f"need m >= k, got m={m}, k={k}")
    ballots = []
    for i, row in enumerate(rows[:n]):
        items = row.split()
        if not all(t.isdigit() for t in items):
            raise ModelError(f"voter {i + 1}: non-numeric entry in {row!r}")
        idx = [int(t) for t in items]
        if len(set(idx)) != len(idx):
            raise ModelError(f"voter {i + 1}: duplicate candidate in ballot")
        for c in idx:
            if c >= m:
                raise ModelError(f"voter {i + 1}: candidate {c} out of range 0..{m - 1}")
        ballots.append(frozenset(idx))
    return Instance(m, k, tuple(ballots))


def serialize_instance(inst: Instance, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"{inst.n} {inst.m} {inst.k}")
    out.extend(" ".join(str(c) for c in sorted(b)) for b in inst.ballots)
    return "\n".join(out) + "\n"


def parse_committee(text: str) -> tuple[int, ...]:
    rows = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
    if len(rows) != 1:
        raise ModelError("committee file must hold exactly one line of indices")
    items = rows[0].replace(",", " ").split()
    if not all(t.isdigit() for t in items):
        raise ModelError(f"malformed committee {rows[0]!r}")
    return tuple(int(t) for t in items)


def serialize_committee(committee: Iterable[int]) -> str:
    return " ".join(str(c) for c in sorted(committee)) + "\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def candidate_label(c: int) -> str:
    return f"c{c + 1}"


def format_voters(group: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(group)) + "}"


def format_candidates(cands: Iterable[int]) -> str:
    return "{" + ",".join(candidate_label(c) for c in sorted(cands)) + "}"
