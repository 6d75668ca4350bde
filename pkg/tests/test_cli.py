from __future__ import annotations

import json
import subprocess
import sys

import pytest

from nmu.cli import EXIT_INPUT, EXIT_OK, EXIT_SIZE, main
from nmu.formats import ParseError, format_poset, parse_cover_pair, parse_poset, read_poset, write_poset
from nmu.poset import Poset, grid_poset
from nmu.records import ResultRecord


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_grid(capsys):
    code, out, _ = run(capsys, "classify", "grid:3x4")
    assert code == EXIT_OK
    assert "n2: true" in out and "embedding Cyl_{3,7}" in out
    assert "c1: 1-2-3-4 | 5-6-7-8 | 9-10-11-12" in out


def test_classify_claw_json(capsys):
    code, out, _ = run(capsys, "classify", "claw", "--mode", "both", "--json")
    assert code == EXIT_OK
    rec = ResultRecord.from_json(out)
    assert not rec.n2 and rec.obstruction["kind"] == "DegreeBound"
    assert rec.brute_force["n2"] is False and rec.mismatches == []


def test_bruteforce_size_guard(capsys):
    code, _, err = run(capsys, "classify", "grid:3x4", "--mode", "bruteforce")
    assert code == EXIT_SIZE and "--force" in err


def test_malformed_file_reports_line(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("poset bad\nelements 3\ncover 1 2\ncover 2 x\n")
    code, _, err = run(capsys, "classify", str(f))
    assert code == EXIT_INPUT
    assert ":4:" in err


def test_cyclic_file_rejected(tmp_path, capsys):
    f = tmp_path / "cyc.txt"
    f.write_text("poset c\nelements 2\ncover 1 2\ncover 2 1\n")
    code, _, _ = run(capsys, "classify", str(f))
    assert code == EXIT_INPUT


def test_verify_grid_and_counterexample(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "grid:3x4", "grid")
    assert code == EXIT_OK and out.startswith("holds: true (zero-one")
    poset = tmp_path / "chain.txt"
    write_poset(poset, Poset(3, [(1, 2), (2, 3)]), "chain3")
    pair = tmp_path / "pair.txt"
    pair.write_text("cover a\nchain 1 2\nchain 3\n---\ncover b\nchain 1\nchain 2 3\n")
    code, out, _ = run(capsys, "verify", str(poset), str(pair), "--labelings", "perms", "--json")
    assert code == EXIT_OK
    v = json.loads(out)
    assert not v["holds"] and v["counterexample"]["labeling"] == [2, 3, 1]


def test_verify_edge_coverage_reason(tmp_path, capsys):
    poset = tmp_path / "p.txt"
    write_poset(poset, Poset(2, [(1, 2)]))
    pair = tmp_path / "pair.txt"
    pair.write_text("cover a\nchain 1\nchain 2\n---\ncover b\nchain 1\nchain 2\n")
    code, out, _ = run(capsys, "verify", str(poset), str(pair))
    assert code == EXIT_OK and "reason: EdgeCoverage" in out


def test_verify_rejects_invalid_cover(tmp_path, capsys):
    poset = tmp_path / "p.txt"
    write_poset(poset, Poset(3, [(1, 2), (2, 3)]))
    pair = tmp_path / "pair.txt"
    pair.write_text("cover a\nchain 1 3\nchain 2\n---\ncover b\nchain 1 2 3\n")
    code, _, _ = run(capsys, "verify", str(poset), str(pair))
    assert code == EXIT_INPUT


def test_sort_worked_matrix(capsys):
    code, out, _ = run(
        capsys, "sort", "grid:3x4", "rows", "--twice", "columns", "--labeling", "4 9 7 8 / 12 5 1 10 / 2 6 11 3", "--json"
    )
    assert code == EXIT_OK
    stages = json.loads(out)
    assert stages["after rows-sort"] == [4, 7, 8, 9, 1, 5, 10, 12, 2, 3, 6, 11]
    assert stages["after columns-sort"] == [1, 3, 6, 9, 2, 5, 8, 11, 4, 7, 10, 12]


def test_sort_wrong_length(capsys):
    code, _, _ = run(capsys, "sort", "grid:2x2", "rows", "--labeling", "1 2 3")
    assert code == EXIT_INPUT


def test_enumerate_and_oracle_small(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-n", "3")
    assert code == EXIT_OK and json.loads(out)["total"] == 1 + 2 + 5
    code, out, _ = run(capsys, "oracle", "--max-n", "3", "--connected")
    s = json.loads(out)
    assert code == EXIT_OK and s["total"] == 1 + 1 + 3 and s["mismatches"] == []


def test_oracle_out_identical_across_jobs(tmp_path, capsys):
    outs = []
    for jobs in (1, 3):
        d = tmp_path / f"j{jobs}"
        assert run(capsys, "oracle", "--max-n", "5", "--jobs", str(jobs), "--out", str(d))[0] == EXIT_OK
        outs.append(((d / "records.jsonl").read_bytes(), (d / "summary.json").read_bytes()))
    assert outs[0] == outs[1]
    lines = outs[0][0].decode().splitlines()
    assert len(lines) == 1 + 2 + 5 + 16 + 63
    rec = ResultRecord.from_json(lines[-1])
    assert rec.timings is None and rec.brute_force is not None


def test_sample_csv_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert run(capsys, "sample", "grid:2x3", "grid", "--trials", "300", "--seed", "5", "--out", str(f))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert rows[0] == "extension,count,frequency"
    assert sum(int(r.split(",")[1]) for r in rows[1:]) == 300


def test_export_roundtrip(tmp_path, capsys):
    p, q = tmp_path / "g.txt", tmp_path / "gp.txt"
    assert run(capsys, "export", "grid:2x3", "--out", str(p), "--pair-out", str(q))[0] == EXIT_OK
    named = read_poset(p)
    assert named.poset == grid_poset(2, 3)
    pair, names = parse_cover_pair(q.read_text(), named.poset)
    assert names == ("rows", "columns") and len(pair.c1.chains) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nmu", "classify", "chain:3"], capture_output=True, text=True)
    assert r.returncode == 0 and "n2: true" in r.stdout


# ---------------------------------------------------------------- formats


def test_poset_text_roundtrip():
    P = Poset(5, [(1, 3), (2, 3), (3, 4), (3, 5)])
    named = parse_poset(format_poset(P, "tree"))
    assert named.name == "tree" and named.poset == P


def test_parse_errors_carry_lines():
    with pytest.raises(ParseError) as exc:
        parse_poset("poset p\nelements 2\ncover 1 2\ncover 1 2\n", "f.txt")
    assert exc.value.line == 4 and str(exc.value).startswith("f.txt:4:")
    with pytest.raises(ParseError):
        parse_poset("elements two\n")


def test_record_json_roundtrip():
    rec = ResultRecord(key="00", n=2, covers=[[1, 2]], n2=True, n2_prime=False, n2_doubleprime=True)
    assert ResultRecord.from_json(rec.to_json()) == rec
    assert rec.poset() == Poset(2, [(1, 2)])
