"""Shipped fixture instances, the facts they certify, and the axiom fingerprint grid."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable

from .axioms import AxiomId, AxiomVerdict, VerdictTable, check_axiom, scan_axiom
from .model import (
    Instance,
    ModelError,
    format_voters,
    parse_instance,
    party_list_structure,
    restrict_candidates,
    satisfies_lower_quota,
)
from .notions import TABLE_NOTIONS, NotionId, replay_witness, verify
from .oracle import InstanceFamily
from .rules import mes, pav_exhaustive
from .witness import check_local_embedding, find_local_embedding, natural_witnesses

CORPUS_VERSION = "v1"


class FixtureError(ModelError):
    """Unknown fixture name or unreadable fixture file."""


@dataclass(frozen=True)
class Fact:
    """One checkable claim about a fixture.

    ``subject`` is a notion id, ``axiom:<axiom>``, or one of ``party-list``,
    ``lower-quota``, ``embedding``, ``rule:<rule>`` and ``natural-witness``.
    ``edit`` replaces ballots (voter index, new ballot) and ``remove`` drops
    candidates before the claim is evaluated; the committee uses the labels
    after removal.
    """

    subject: str
    committee: tuple[int, ...] | None
    expected: str
    detail: str = ""
    notion: str = ""
    edit: tuple = ()
    remove: tuple[int, ...] = ()
    params: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class Fixture:
    name: str
    instance: Instance
    committee: tuple[int, ...] | None
    facts: tuple[Fact, ...]
    note: str = ""


@dataclass(frozen=True)
class FactResult:
    fixture: str
    fact: Fact
    passed: bool
    observed: str

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        label = self.fact.subject + (f"[{self.fact.notion}]" if self.fact.notion else "")
        return f"{mark}\t{self.fixture}\t{label}\texpected={self.fact.expected}\tobserved={self.observed}"


# -- fixture files -------------------------------------------------------------------


def _data_dir():
    return resources.files("abcprop") / "data" / CORPUS_VERSION


def fixture_names() -> list[str]:
    return sorted(_FACTS)


def load_fixture_instance(name: str) -> Instance:
    path = _data_dir() / f"{name}.abci"
    if not path.is_file():
        raise FixtureError(f"unknown fixture {name!r}")
    return parse_instance(path.read_text(encoding="utf-8"))


def fixture_path(name: str) -> str:
    if name not in _FACTS:
        raise FixtureError(f"unknown fixture {name!r}")
    return str(_data_dir() / f"{name}.abci")


def fixture(name: str) -> Fixture:
    if name not in _FACTS:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    committee, note, facts = _FACTS[name]
    return Fixture(name, load_fixture_instance(name), committee, tuple(facts), note)


# -- facts ---------------------------------------------------------------------------

# committees below are 0-based candidate indices
_W2 = (3, 4, 5, 6)
_W3 = (0, 2, 3, 4, 5, 6)
_W7 = (0, 5, 6, 7, 8, 9)
_W123 = (0, 1, 2)

_FACTS: dict[str, tuple] = {
    "fig2": (_W2, "lower quota and losers", [
        Fact("party-list", None, "absent", note="c3 overlaps two different ballots"),
        Fact("party-list", None, "present", remove=(2,), note="dropping c3 leaves two parties"),
        Fact("lower-quota", (2, 3, 4, 5), "violated", remove=(2,),
             note="party {c1,c2} is owed both seats"),
        Fact("pjr+", _W2, "violated", "witness={1,2}, ell=2, c=c1"),
        Fact("rule:mes", None, "contains", params=(0, 1), note="equal shares buys c1 and c2"),
    ]),
    "fig3": (_W3, "monotonicity separates PJR/EJR from the plus notions", [
        Fact("pjr", _W3, "satisfied"),
        Fact("ejr", _W3, "satisfied"),
        Fact("ejr+", _W3, "violated", "witness={1,2}, ell=3, c=c2"),
        Fact("pjr+", _W3, "violated", "witness={1,2}, ell=3, c=c2"),
        Fact("pjr", _W3, "violated", edit=((1, (0, 1, 2)),), note="voter 2 also approves c3"),
        Fact("ejr", _W3, "violated", edit=((1, (0, 1, 2)),), note="voter 2 also approves c3"),
        Fact("axiom:monotonicity", _W3, "violated", notion="pjr"),
        Fact("axiom:monotonicity", _W3, "not-applicable", notion="ejr+"),
        Fact("natural-witness", _W3, "contains", notion="ejr+", params=(0, 1)),
    ]),
    "fig4": (None, "local embedding in both directions", [
        Fact("embedding", None, "exists", params=((0, 1, 2), (0, 1, 2), (3, 4, 5), (3, 4, 0))),
        Fact("embedding", None, "absent", params=((3, 4, 5), (3, 4, 0), (0, 1, 2), (0, 1, 2))),
    ]),
    "fig5": (_W3, "PJR+ is not robust to approval swaps", [
        Fact("pjr+", _W3, "satisfied"),
        Fact("pjr", _W3, "satisfied"),
        Fact("pjr+", _W3, "violated", edit=((1, (0, 1, 2)),), note="voter 2 swaps c6 for c3"),
        Fact("axiom:ioas", _W3, "violated", notion="pjr+"),
    ]),
    "fig6": (_W123, "EJR witness dissolved by merging ballots", [
        Fact("ejr", _W123, "violated", "witness={1,2,3,4}, ell=2, C'={c4,c5}"),
        Fact("pjr", _W123, "satisfied"),
        Fact("ejr", _W123, "satisfied", edit=tuple((i, (0, 1, 3, 4)) for i in range(4)),
             note="voters 1-4 all approve c1,c2,c4,c5"),
        Fact("axiom:merge-proofness", _W123, "violated", notion="ejr"),
    ]),
    "fig7": (_W7, "EJR+ committee that is not priceable", [
        Fact("ejr+", _W7, "satisfied"),
        Fact("priceable", _W7, "violated"),
        Fact("fpjr", _W7, "violated"),
        Fact("axiom:cohesiveness-based", _W7, "violated", notion="fpjr"),
        Fact("axiom:cohesiveness-based", _W7, "violated", notion="subcore"),
    ]),
    "fig8": ((1, 2, 3, 4), "EJR+ holds while NPR fails", [
        Fact("ejr+", (1, 2, 3, 4), "satisfied"),
        Fact("npr", (1, 2, 3, 4), "violated", "witness={1,2,3,4}, ell=4, c=c1, avg=5/2"),
        Fact("axiom:individual-discontentment", (1, 2, 3, 4), "violated", notion="npr"),
        Fact("rule:pav", None, "contains", params=(0,)),
    ]),
    "fig9": ((2, 3, 4, 5), "PJR versus overlap-PJR", [
        Fact("pjr", (2, 3, 4, 5), "violated", "witness={1,2}, ell=2, C'={c1,c2}"),
        # voter 2 alone is a 1-large, 1-cohesive group with nothing elected
        Fact("overlap-pjr", (2, 3, 4, 5), "violated", "witness={2}, ell=1, C'={c1,c2}"),
        Fact("jr", (2, 3, 4, 5), "violated", "witness={2}, ell=1, c=c1"),
        Fact("overlap-pjr", (2, 3, 4, 5), "violated", edit=((1, (0, 1, 2)),),
             note="voter 2 also approves c3"),
    ]),
    "fig10": ((0, 1, 2, 3), "JR ignores lower quota", [
        Fact("party-list", None, "present"),
        Fact("jr", (0, 1, 2, 3), "satisfied"),
        Fact("lower-quota", (0, 1, 2, 3), "violated"),
        Fact("axiom:lq-party-lists", (0, 1, 2, 3), "violated", notion="jr"),
        Fact("axiom:lq-party-lists", (0, 1, 3, 4), "holds-on-family", notion="ejr+"),
    ]),
    "fig11": (_W123, "priceable, but not after satisfied voters shrink", [
        Fact("priceable", _W123, "satisfied"),
        Fact("priceable", _W123, "violated", edit=((1, (2,)), (2, (2,))),
             note="voters 2 and 3 keep only c3"),
        Fact("axiom:rfsv", _W123, "violated", notion="priceable"),
    ]),
    "fig12": (_W123, "core deviation needs three candidates", [
        Fact("core", _W123, "violated", "witness={1,2,3,4,5,6}, ell=3, C'={c4,c5,c6}"),
        Fact("pjr", _W123, "satisfied"),
        Fact("axiom:cohesiveness-based", _W123, "violated", notion="core"),
        Fact("axiom:strong-iol", _W123, "violated", notion="core"),
        Fact("natural-witness", _W123, "contains", notion="core", params=tuple(range(6))),
        Fact("embedding", None, "exists",
             params=((0, 1, 2, 3), _W123, (0, 1, 2, 3), _W123, "core_cycle_prime"),
             note="voters 1-4 look the same in the companion instance"),
    ]),
    "core_cycle_prime": (_W123, "core companion instance", [
        Fact("core", _W123, "satisfied"),
        Fact("pjr", _W123, "satisfied"),
    ]),
    "proof_sketch": ((0, 1, 2, 3), "party-list refutation walkthrough", [
        Fact("pjr+", (0, 1, 2, 3), "violated"),
        Fact("ejr+", (0, 1, 2, 3), "violated", "witness={1,2,3}, ell=3, c=c5"),
    ]),
    "ejrp_expareto": ((2, 3), "exPareto witness without a common candidate", [
        Fact("ejr+", (2, 3), "satisfied"),
        Fact("ejr+-expareto", (2, 3), "violated", "witness={1,2,3,4}, W'={c1,c2}"),
        Fact("axiom:cohesiveness-based", (2, 3), "violated", notion="ejr+-expareto"),
    ]),
    "equal_ejrp": ((0, 1), "equal-EJR+ fails monotonicity", [
        Fact("equal-ejr+", (0, 1), "satisfied"),
        Fact("ejr+", (0, 1), "violated"),
        Fact("axiom:monotonicity", (0, 1), "violated", notion="equal-ejr+"),
    ]),
    "weak_ejrp": ((1, 2, 3, 4), "weak-EJR+ fails robustness to satisfied voters", [
        Fact("weak-ejr+", (1, 2, 3, 4), "satisfied"),
        Fact("axiom:rfsv", (1, 2, 3, 4), "violated", notion="weak-ejr+"),
    ]),
    "diff_ejrp": ((2, 3), "difference-EJR+ against EJR+", [
        Fact("ejr+", (2, 3), "violated", "witness={1,2}, ell=1, c=c1"),
        Fact("diff-ejr+", (2, 3), "satisfied"),
        Fact("diff-pjr+", (2, 3), "satisfied"),
    ]),
    "price_ias": ((0, 1), "priceability and approval swaps", [
        Fact("priceable", (0, 1), "satisfied"),
        Fact("axiom:ioas", (0, 1), "violated", notion="priceable"),
    ]),
    "price_wf": (_W123, "priceability with the whole electorate as witness", [
        Fact("priceable", _W123, "violated"),
        Fact("ejr+", _W123, "satisfied"),
        Fact("axiom:individual-discontentment", _W123, "violated", notion="priceable"),
    ]),
    "price_mp": (_W123, "priceability and merge-proofness", [
        Fact("priceable", _W123, "violated"),
        Fact("party-list", None, "present"),
        Fact("axiom:merge-proofness", _W123, "violated", notion="priceable"),
    ]),
    "droop_3v2": ((0, 1), "Droop quota is stricter than Hare", [
        Fact("lower-quota", (0, 1), "satisfied"),
        Fact("lq", (0, 1), "satisfied"),
        Fact("droop-ejr+", (0, 1), "violated", "witness={4,5}, ell=1, c=c3"),
        Fact("ejr+", (0, 1), "satisfied"),
    ]),
    "price_100v1": ((0, 2), "one seat each for 100 and 1 voters", [
        Fact("priceable", (0, 2), "violated"),
        Fact("lower-quota", (0, 2), "satisfied"),
        Fact("ejr+", (0, 2), "satisfied"),
    ]),
}


def _prepare(inst: Instance, fact: Fact) -> Instance:
    if fact.edit:
        masks = list(inst.masks)
        for i, ballot in fact.edit:
            masks[i] = sum(1 << c for c in ballot)
        inst = inst.with_masks(masks)
    if fact.remove:
        inst, _ = restrict_candidates(inst, [c for c in range(inst.m) if c not in fact.remove])
    return inst


def _evaluate(inst: Instance, fact: Fact) -> str:
    subject = fact.subject
    if subject == "party-list":
        return "present" if party_list_structure(inst) is not None else "absent"
    if subject == "lower-quota":
        return "satisfied" if satisfies_lower_quota(inst, fact.committee) else "violated"
    if subject == "embedding":
        src_g, src_w, dst_g, dst_w = fact.params[:4]
        target = load_fixture_instance(fact.params[4]) if len(fact.params) > 4 else inst
        emb = find_local_embedding(inst, src_g, src_w, target, dst_g, dst_w)
        if emb is None:
            return "absent"
        if not check_local_embedding(inst, src_g, src_w, target, dst_g, dst_w, emb):
            return "invalid-embedding"
        return "exists"
    if subject.startswith("rule:"):
        committee = mes(inst) if subject == "rule:mes" else pav_exhaustive(inst)
        ok = set(fact.params) <= set(committee)
        return ("contains" if ok else "lacks") + f" W={committee}"
    if subject == "natural-witness":
        groups = natural_witnesses(fact.notion, inst, fact.committee)
        return "contains" if frozenset(fact.params) in groups.groups else "lacks"
    if subject.startswith("axiom:"):
        v = check_axiom(fact.notion, subject.split(":", 1)[1], inst, fact.committee)
        if v.violated and not v.replay():
            return "violated-without-replay"
        return v.status
    res = verify(subject, inst, fact.committee)
    if res.satisfied:
        return "satisfied"
    if not replay_witness(inst, fact.committee, res.witness):
        return "violated-without-replay"
    return "violated; " + res.witness.describe()


def _matches(fact: Fact, observed: str) -> bool:
    head = observed.split(";")[0].split(" W=")[0]
    if head != fact.expected:
        return False
    if fact.detail:
        return observed == f"{fact.expected}; {fact.detail}"
    return True


def replay_fixture(f: Fixture | str) -> list[FactResult]:
    """Evaluate every fact of a fixture; failures are reported, never raised."""
    if isinstance(f, str):
        f = fixture(f)
    out = []
    for fact in f.facts:
        try:
            observed = _evaluate(_prepare(f.instance, fact), fact)
        except Exception as exc:  # reported as a failed fact
            observed = f"error: {type(exc).__name__}: {exc}"
        out.append(FactResult(f.name, fact, _matches(fact, observed), observed))
    return out


def replay_all() -> list[FactResult]:
    out = []
    for name in fixture_names():
        out.extend(replay_fixture(name))
    return out


def fact_count() -> int:
    return sum(len(facts) for _, _, facts in _FACTS.values())


# -- fingerprint ---------------------------------------------------------------------

WITNESS_BASED = "witness-based"

# (row id, short label); row ids are axiom ids except the witness-based row
FINGERPRINT_ROWS = (
    ("lq-party-lists", "LQpl"),
    ("lq-extension", "LQext"),
    ("monotonicity", "Mono"),
    ("rfsv", "RFSV"),
    ("ioas", "IoAS"),
    ("iol", "IoL"),
    (WITNESS_BASED, "WB"),
    ("cohesiveness-based", "Coh"),
    ("individual-discontentment", "ID"),
    ("merge-proofness", "MP"),
)

COLUMN_LABELS = {
    NotionId.JR: "JR", NotionId.PJR: "PJR", NotionId.EJR: "EJR", NotionId.PJR_PLUS: "PJR+",
    NotionId.EJR_PLUS: "EJR+", NotionId.SUBCORE: "SubCore", NotionId.FPJR: "FPJR",
    NotionId.FJR: "FJR", NotionId.CORE: "Core", NotionId.PRICEABLE: "Price", NotionId.NPR: "NPR",
}

# columns in TABLE_NOTIONS order: JR PJR EJR PJR+ EJR+ SubCore FPJR FJR Core Price NPR
EXPECTED = {
    "lq-party-lists":            "xvvvvvvvvvv",
    "lq-extension":              "xvvvvvvvvxv",
    "monotonicity":              "vxxvvvxxvvv",
    "rfsv":                      "vvvvvvvvvxv",
    "ioas":                      "vxxxvxxxxxv",
    "iol":                       "vvvvvvvvvvv",
    WITNESS_BASED:               "vvvvvvvvvvv",
    "cohesiveness-based":        "vvvvvxxxxxv",
    "individual-discontentment": "vvvvvvvvvxx",
    "merge-proofness":           "vvxvxvvxxxx",
}

# the four columns of the smaller table
TABLE1_ROWS = ("lq-party-lists", "iol", "rfsv", "monotonicity", "ioas")
TABLE1_NOTIONS = (NotionId.PJR, NotionId.EJR, NotionId.PJR_PLUS, NotionId.EJR_PLUS)

# fixtures used when the bounded search finds no counterexample for a ✗ cell
FALLBACKS = {
    ("monotonicity", NotionId.PJR): ("fig3", _W3),
    ("monotonicity", NotionId.EJR): ("fig3", _W3),
    ("ioas", NotionId.PJR_PLUS): ("fig5", _W3),
    ("ioas", NotionId.PRICEABLE): ("price_ias", (0, 1)),
    ("rfsv", NotionId.PRICEABLE): ("fig11", _W123),
    ("lq-party-lists", NotionId.JR): ("fig10", (0, 1, 2, 3)),
    ("cohesiveness-based", NotionId.CORE): ("fig12", _W123),
    ("cohesiveness-based", NotionId.SUBCORE): ("fig7", _W7),
    ("cohesiveness-based", NotionId.FPJR): ("fig7", _W7),
    ("cohesiveness-based", NotionId.FJR): ("fig7", _W7),
    ("cohesiveness-based", NotionId.PRICEABLE): ("fig7", _W7),
    ("individual-discontentment", NotionId.NPR): ("fig8", (1, 2, 3, 4)),
    ("individual-discontentment", NotionId.PRICEABLE): ("price_wf", _W123),
    ("merge-proofness", NotionId.EJR): ("fig6", _W123),
    ("merge-proofness", NotionId.EJR_PLUS): ("fig6", _W123),
    ("merge-proofness", NotionId.FJR): ("fig6", _W123),
    ("merge-proofness", NotionId.CORE): ("fig6", _W123),
    ("merge-proofness", NotionId.PRICEABLE): ("price_mp", _W123),
}


@dataclass
class FingerprintCell:
    row: str
    notion: NotionId
    mark: str  # "✓" or "✗"
    source: str  # "search", "fixture:<name>" or "certificate"
    verdict: AxiomVerdict | None = None
    parts: tuple = ()  # sub-verdicts of the witness-based row

    def replays(self) -> bool:
        if self.mark == "✓":
            return all(not v.violated for v in self.parts) if self.parts else (
                self.verdict is not None and not self.verdict.violated)
        return self.verdict is not None and self.verdict.replay()

    def evidence(self) -> str:
        if self.mark == "✓":
            return f"no counterexample ({self.source})"
        v = self.verdict
        return f"{self.source}: {v.instance.masks} W={sorted(v.committee)}"


@dataclass
class FingerprintTable:
    family: str
    witness_family: str
    cells: dict = field(default_factory=dict)
    seconds: float = 0.0

    def mark(self, row: str, notion) -> str:
        return self.cells[row, NotionId.parse(notion)].mark

    def expected_mark(self, row: str, notion) -> str:
        j = TABLE_NOTIONS.index(NotionId.parse(notion))
        return "✓" if EXPECTED[row][j] == "v" else "✗"

    def mismatches(self) -> list[tuple[str, NotionId, str, str]]:
        out = []
        for (row, nid), cell in sorted(self.cells.items(), key=lambda kv: _cell_order(kv[0])):
            want = self.expected_mark(row, nid)
            if cell.mark != want:
                out.append((row, nid, want, cell.mark))
        return out

    def unreplayed(self) -> list[tuple[str, NotionId]]:
        return [key for key, cell in self.cells.items() if not cell.replays()]

    def grid(self, rows=None, notions=None) -> str:
        rows = rows or [r for r, _ in FINGERPRINT_ROWS]
        notions = notions or TABLE_NOTIONS
        labels = dict(FINGERPRINT_ROWS)
        width = max(len(labels[r]) for r in rows)
        head = " " * width + " | " + " ".join(f"{COLUMN_LABELS[n]:>7}" for n in notions)
        lines = [head, "-" * len(head)]
        for r in rows:
            cells = " ".join(f"{self.cells[r, n].mark:>7}" for n in notions)
            lines.append(f"{labels[r]:<{width}} | {cells}")
        return "\n".join(lines) + "\n"

    def tsv(self) -> str:
        lines = ["row\tnotion\tmark\texpected\tsource\tevidence"]
        for (row, nid), cell in sorted(self.cells.items(), key=lambda kv: _cell_order(kv[0])):
            lines.append(f"{row}\t{nid}\t{cell.mark}\t{self.expected_mark(row, nid)}"
                         f"\t{cell.source}\t{cell.evidence()}")
        return "\n".join(lines) + "\n"


def _cell_order(key):
    row, nid = key
    rows = [r for r, _ in FINGERPRINT_ROWS]
    return rows.index(row), TABLE_NOTIONS.index(nid)


def _fixture_cell(row: str, nid: NotionId) -> FingerprintCell | None:
    spec = FALLBACKS.get((row, nid))
    if spec is None:
        return None
    name, committee = spec
    v = check_axiom(nid, row, load_fixture_instance(name), committee)
    if v.violated and v.replay():
        return FingerprintCell(row, nid, "✗", f"fixture:{name}", v)
    return None


def _cells_from_scan(row: str, verdicts: dict, label: str) -> dict:
    out = {}
    for nid, v in verdicts.items():
        if v.violated and v.replay():
            out[row, nid] = FingerprintCell(row, nid, "✗", "search", v)
            continue
        cell = _fixture_cell(row, nid)
        out[row, nid] = cell or FingerprintCell(row, nid, "✓", f"certificate: {label}", v)
    return out


def fingerprint(family: InstanceFamily | None = None,
                witness_family: InstanceFamily | None = None,
                jobs: int = 1, notions: Iterable = TABLE_NOTIONS,
                rows: Iterable[str] | None = None,
                log: Callable[[str], None] | None = None) -> FingerprintTable:
    """Fill the notion-by-axiom grid.

    Transformation rows are scanned over ``family`` through a shared verdict
    table; witness-level rows and anonymity use the smaller
    ``witness_family``, where enumerating natural witnesses stays cheap.
    """
    family = family or InstanceFamily(4, 5, 3)
    witness_family = witness_family or InstanceFamily(3, 4, 3)
    notions = [NotionId.parse(x) for x in notions]
    rows = list(rows) if rows is not None else [r for r, _ in FINGERPRINT_ROWS]
    log = log or (lambda _msg: None)
    start = time.monotonic()
    table = VerdictTable(notions)
    instances = list(family)
    log(f"verdict table over {len(instances)} instances")
    table.fill(instances, jobs)
    log(f"table ready after {time.monotonic() - start:.0f}s")
    out = FingerprintTable(family.label(), witness_family.label())
    small = list(witness_family)
    for row in rows:
        if row == WITNESS_BASED:
            continue
        axiom = AxiomId.parse(row)
        fam = small if axiom in (AxiomId.COHESIVENESS_BASED, AxiomId.INDIVIDUAL_DISCONTENTMENT,
                                 AxiomId.MERGE_PROOFNESS) else instances
        label = witness_family.label() if fam is small else family.label()
        verdicts = scan_axiom(axiom, notions, _Labelled(fam, label), table)
        out.cells.update(_cells_from_scan(row, verdicts, label))
        log(f"{row} done after {time.monotonic() - start:.0f}s")
    if WITNESS_BASED in rows:
        parts: dict = {nid: [] for nid in notions}
        for axiom, fam, label in (
            (AxiomId.ANONYMITY, small, witness_family.label()),
            (AxiomId.NEUTRALITY, instances, family.label()),
            (AxiomId.INDEPENDENCE_OF_UNAPPROVED, instances, family.label()),
            (AxiomId.INDEPENDENCE_OF_LOSERS, instances, family.label()),
        ):
            for nid, v in scan_axiom(axiom, notions, _Labelled(fam, label), table).items():
                parts[nid].append(v)
        for nid in notions:
            broken = [v for v in parts[nid] if v.violated]
            if broken:
                cell = FingerprintCell(WITNESS_BASED, nid, "✗", "search", broken[0],
                                       tuple(parts[nid]))
            else:
                cell = FingerprintCell(WITNESS_BASED, nid, "✓",
                                       "certificate: anonymity, neutrality, iuc, iol",
                                       None, tuple(parts[nid]))
            out.cells[WITNESS_BASED, nid] = cell
        log(f"{WITNESS_BASED} done after {time.monotonic() - start:.0f}s")
    out.seconds = time.monotonic() - start
    return out


class _Labelled:
    """An instance list that reports the family label it came from."""

    def __init__(self, items, label):
        self.items, self._label = items, label

    def __iter__(self):
        return iter(self.items)

    def label(self) -> str:
        return self._label


def describe_voters(group) -> str:
    return format_voters(group)


__all__ = [
    "CORPUS_VERSION",
    "EXPECTED",
    "FALLBACKS",
    "FINGERPRINT_ROWS",
    "Fact",
    "FactResult",
    "Fixture",
    "FixtureError",
    "FingerprintCell",
    "FingerprintTable",
    "TABLE1_NOTIONS",
    "TABLE1_ROWS",
    "WITNESS_BASED",
    "fact_count",
    "fingerprint",
    "fixture",
    "fixture_names",
    "fixture_path",
    "load_fixture_instance",
    "replay_all",
    "replay_fixture",
]
