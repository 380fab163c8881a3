"""Command-line entry point: ``abcprop <command> ...``.

Exit codes: 0 completed (property holds), 1 property violated or a check
failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .axioms import AxiomId, check_axiom, search_axiom_violation
from .corpus import fingerprint, fixture_names, fixture_path, replay_all, replay_fixture
from .model import (
    ModelError,
    committee_mask,
    format_candidates,
    load_instance,
    parse_committee,
    serialize_committee,
    serialize_instance,
)
from .notions import NotionId, verify
from .oracle import InstanceFamily
from .rules import mes, pav_exhaustive, random_instance
from .witness import check_local_embedding, find_local_embedding, witness_jsonl


class UsageError(Exception):
    pass


def _instance(path: str):
    """Load an instance file; a bare fixture name (``fig3`` or ``fig3.abci``) also works."""
    if os.path.exists(path):
        return load_instance(path)
    stem = os.path.basename(path)
    stem = stem[:-5] if stem.endswith(".abci") else stem
    if stem in fixture_names():
        return load_instance(fixture_path(stem))
    raise UsageError(f"no such instance file: {path}")


def _committee(inst, text: str) -> tuple[int, ...]:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    members = parse_committee(text)
    committee_mask(inst, members)
    return members


def _voters(text: str) -> tuple[int, ...]:
    items = text.replace(",", " ").split()
    if not items or not all(t.isdigit() and int(t) >= 1 for t in items):
        raise UsageError(f"voters must be 1-based numbers, got {text!r}")
    return tuple(int(t) - 1 for t in items)


def _side(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected PATH:VOTERS:COMMITTEE, got {text!r}")
    inst = _instance(parts[0])
    return inst, _voters(parts[1]), _committee(inst, parts[2])


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- commands ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    inst = _instance(args.instance)
    committee = _committee(inst, args.committee)
    res = verify(args.notion, inst, committee)
    print(res.describe())
    if res.witness is not None:
        print(json.dumps(res.witness.to_json()))
    return 0 if res.satisfied else 1


def cmd_witnesses(args) -> int:
    inst = _instance(args.instance)
    committee = _committee(inst, args.committee)
    text = witness_jsonl(args.notion, inst, committee)
    _write(args.out, text)
    return 0 if not text.strip() else 1


def cmd_axiom(args) -> int:
    inst = _instance(args.instance)
    committee = _committee(inst, args.committee)
    v = check_axiom(args.notion, args.axiom, inst, committee)
    print(v.describe())
    if v.violated and v.transformed is not None:
        sys.stdout.write(serialize_instance(v.transformed, ["transformed instance"]))
        print("# committee " + serialize_committee(v.transformed_committee).strip())
    return 1 if v.violated else 0


def cmd_search(args) -> int:
    if args.random:
        fam = InstanceFamily(args.max_n, args.max_m, args.max_k, mode="random",
                             count=args.random, seed=args.seed)
    else:
        fam = InstanceFamily(args.max_n, args.max_m, args.max_k)
    v = search_axiom_violation(args.notion, args.axiom, fam)
    print(v.describe())
    if not v.violated:
        return 0
    comments = [f"{v.notion} fails {v.axiom}", f"committee {serialize_committee(v.committee).strip()}"]
    if v.detail:
        comments.append(v.detail)
    _write(args.out, serialize_instance(v.instance, comments))
    return 1


def cmd_embed(args) -> int:
    src, sg, sw = _side(args.source)
    dst, dg, dw = _side(args.target)
    if len(sg) != len(dg):
        raise UsageError("both voter groups must have the same size")
    emb = find_local_embedding(src, sg, sw, dst, dg, dw)
    if emb is None:
        print("no local embedding")
        return 1
    assert check_local_embedding(src, sg, sw, dst, dg, dw, emb)
    voters = ", ".join(f"{i + 1}->{j + 1}" for i, j in sorted(emb.voter_map.items()))
    cands = ", ".join(f"c{c + 1}->c{d + 1}" for c, d in sorted(emb.candidate_map.items()))
    print(f"voters: {voters}")
    print(f"candidates: {cands}")
    return 0


def cmd_rule(args) -> int:
    inst = _instance(args.instance)
    committee = mes(inst) if args.rule == "mes" else pav_exhaustive(inst)
    print(serialize_committee(committee).strip())
    if args.verbose:
        print(format_candidates(committee))
    return 0


def cmd_fingerprint(args) -> int:
    fam = InstanceFamily(args.max_n, args.max_m, args.max_k)
    wfam = InstanceFamily(min(args.max_n, args.witness_max_n),
                          min(args.max_m, args.witness_max_m), args.max_k)
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    table = fingerprint(fam, wfam, jobs=args.jobs, log=log)
    sys.stdout.write(table.grid())
    if args.out:
        _write(args.out, table.tsv())
    bad = table.mismatches()
    for row, nid, want, got in bad:
        print(f"mismatch: {row} / {nid}: expected {want}, got {got}")
    unreplayed = table.unreplayed()
    for row, nid in unreplayed:
        print(f"evidence does not replay: {row} / {nid}")
    return 1 if bad or unreplayed else 0


def cmd_corpus(args) -> int:
    if args.list:
        for name in fixture_names():
            print(name)
        return 0
    if args.export:
        os.makedirs(args.export, exist_ok=True)
        for name in fixture_names():
            with open(fixture_path(name), encoding="utf-8") as src:
                _write(os.path.join(args.export, f"{name}.abci"), src.read())
        return 0
    if args.fixture:
        results = replay_fixture(args.fixture)
    elif args.replay_all:
        results = replay_all()
    else:
        raise UsageError("corpus needs --replay-all, --fixture, --list or --export")
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} facts pass")
    return 1 if failed else 0


def cmd_gen(args) -> int:
    inst = random_instance(args.n, args.m, args.k, args.p, args.seed,
                           require_nonempty=args.nonempty)
    _write(args.out, serialize_instance(inst, [f"random n={args.n} m={args.m} k={args.k} "
                                               f"p={args.p} seed={args.seed}"]))
    return 0


# -- parser -----------------------------------------------------------------------


def _notion(text):
    try:
        return NotionId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _axiom(text):
    try:
        return AxiomId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abcprop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for family scans")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p, notion=True):
        if notion:
            p.add_argument("--notion", required=True, type=_notion)
        p.add_argument("--instance", required=True, help="instance file or fixture name")
        p.add_argument("--committee", required=True, help="0-based indices or a committee file")

    p = sub.add_parser("verify", help="decide one notion for one committee")
    pair(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witnesses", help="natural witnesses as JSON lines")
    pair(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_witnesses)

    p = sub.add_parser("axiom", help="check one axiom at one committee")
    pair(p)
    p.add_argument("--axiom", required=True, type=_axiom)
    p.set_defaults(func=cmd_axiom)

    p = sub.add_parser("search", help="search a bounded family for an axiom violation")
    p.add_argument("--notion", required=True, type=_notion)
    p.add_argument("--axiom", required=True, type=_axiom)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, help="sample this many instances instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("embed", help="find a local embedding")
    p.add_argument("--from", dest="source", required=True, help="PATH:VOTERS:COMMITTEE")
    p.add_argument("--to", dest="target", required=True, help="PATH:VOTERS:COMMITTEE")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("rule", help="run a committee rule")
    p.add_argument("--rule", required=True, choices=["mes", "pav"])
    p.add_argument("--instance", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_rule)

    p = sub.add_parser("fingerprint", help="notion-by-axiom grid over a bounded family")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--witness-max-n", type=int, default=3)
    p.add_argument("--witness-max-m", type=int, default=4)
    p.add_argument("--out")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("corpus", help="replay shipped fixtures")
    p.add_argument("--replay-all", action="store_true")
    p.add_argument("--fixture")
    p.add_argument("--list", action="store_true")
    p.add_argument("--export", metavar="DIR")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("gen", help="random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nonempty", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except (UsageError, ModelError) as exc:
        print(f"abcprop: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
