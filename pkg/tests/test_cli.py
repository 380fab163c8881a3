import json
import subprocess
import sys

import pytest

from abcprop import __version__
from abcprop.cli import main
from abcprop.corpus import fact_count
from abcprop.model import load_instance, parse_committee


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_violation(capsys):
    code, out, _ = run(capsys, "verify", "--notion", "ejr+", "--instance", "fig3",
                       "--committee", "0 2 3 4 5 6")
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "violated; witness={1,2}, ell=3, c=c2"
    assert json.loads(lines[1])["group"] == [1, 2]


def test_verify_satisfied_and_committee_file(capsys, tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("# winners\n0 2 3 4 5 6\n")
    code, out, _ = run(capsys, "verify", "--notion", "pjr", "--instance", "fig3.abci",
                       "--committee", str(path))
    assert (code, out.strip()) == (0, "satisfied")


def test_input_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--notion", "ejr+", "--instance", "fig3",
                       "--committee", "0 1")
    assert code == 2 and "expected k=6" in err
    code, _, err = run(capsys, "verify", "--notion", "ejr+", "--instance",
                       str(tmp_path / "missing.abci"), "--committee", "0")
    assert code == 2 and "no such instance" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--notion", "nope", "--instance", "fig3", "--committee", "0"])
    assert exc.value.code == 2


def test_witnesses(capsys, tmp_path):
    out_path = tmp_path / "w.jsonl"
    code, _, _ = run(capsys, "witnesses", "--notion", "ejr+", "--instance", "fig3",
                     "--committee", "0 2 3 4 5 6", "--out", str(out_path))
    rows = [json.loads(x) for x in out_path.read_text().splitlines()]
    assert code == 1 and {"notion": "ejr+", "group": [1, 2], "ell": 3, "anchors": [2]} in rows


def test_axiom(capsys):
    code, out, _ = run(capsys, "axiom", "--notion", "pjr", "--axiom", "monotonicity",
                       "--instance", "fig3", "--committee", "0 2 3 4 5 6")
    assert code == 1 and out.startswith("pjr / monotonicity: violated")
    assert "# committee 0 2 3 4 5 6" in out


def test_search_writes_counterexample(capsys, tmp_path):
    path = tmp_path / "cx.abci"
    code, out, _ = run(capsys, "search", "--notion", "pjr", "--axiom", "monotonicity",
                       "--max-n", "4", "--max-m", "5", "--out", str(path))
    assert code == 1 and "violated" in out
    inst = load_instance(path)
    committee = parse_committee(path.read_text().split("# committee ")[1].split("\n")[0])
    code, _, _ = run(capsys, "axiom", "--notion", "pjr", "--axiom", "monotonicity",
                     "--instance", str(path), "--committee", " ".join(map(str, committee)))
    assert code == 1 and inst.k == len(committee)


def test_search_holds(capsys):
    code, out, _ = run(capsys, "search", "--notion", "ejr+", "--axiom", "monotonicity",
                       "--max-n", "2", "--max-m", "3")
    assert code == 0 and "holds-on-family" in out


def test_embed(capsys):
    code, out, _ = run(capsys, "embed", "--from", "fig4:1,2,3:0 1 2", "--to", "fig4:4,5,6:3 4 0")
    assert code == 0
    assert out.splitlines() == ["voters: 1->4, 2->5, 3->6",
                                "candidates: c1->c5, c2->c1, c3->c4"]
    code, out, _ = run(capsys, "embed", "--from", "fig4:4,5,6:3 4 0", "--to", "fig4:1,2,3:0 1 2")
    assert (code, out.strip()) == (1, "no local embedding")
    code, _, _ = run(capsys, "embed", "--from", "fig4:0:0 1 2", "--to", "fig4:1:0 1 2")
    assert code == 2


def test_rule(capsys):
    code, out, _ = run(capsys, "rule", "--rule", "pav", "--instance", "fig8", "--verbose")
    assert code == 0 and out.splitlines()[0].split()[0] == "0"


def test_corpus(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "--replay-all")
    assert code == 0 and out.splitlines()[-1] == f"{fact_count()}/{fact_count()} facts pass"
    code, out, _ = run(capsys, "corpus", "--list")
    assert "fig12" in out.split()
    code, _, _ = run(capsys, "corpus", "--export", str(tmp_path / "x"))
    assert (tmp_path / "x" / "fig3.abci").exists()
    assert run(capsys, "corpus")[0] == 2


def test_gen_roundtrip(capsys, tmp_path):
    path = tmp_path / "r.abci"
    assert run(capsys, "gen", "--n", "5", "--m", "4", "--k", "2", "--p", "0.5",
               "--seed", "3", "--out", str(path))[0] == 0
    inst = load_instance(path)
    assert (inst.n, inst.m, inst.k) == (5, 4, 2)


def test_fingerprint_small(capsys, tmp_path):
    # tiny family: many cells come out different from the full grid, so only the format is checked
    path = tmp_path / "fp.tsv"
    code, out, _ = run(capsys, "fingerprint", "--max-n", "2", "--max-m", "2", "--max-k", "1",
                       "--out", str(path))
    assert code in (0, 1)
    assert "EJR+" in out.splitlines()[0]
    assert path.read_text().startswith("row\tnotion\tmark")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abcprop", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
