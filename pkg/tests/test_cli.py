# File: tests/test_cli.py

import json

import numpy as np
import pytest

from src.cli.runner import run
from src.coloring.engine import Coloring, save_coloring
from src.coloring.solver import REPORTED_NEAR_MISSES
from src.database import manager


def test_golay_check(capsys):
    assert run(["golay", "--check", "--no-history"]) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")


def test_counts_all_passes(capsys):
    assert run(["counts", "--all", "--no-history"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 25
    assert all(line.endswith("PASS") for line in lines[1:])


def test_counts_pdf(tmp_path):
    pdf = str(tmp_path / "counts.pdf")
    assert run(["counts", "--dim", "16", "--pdf", pdf, "--no-history"]) == 0
    assert open(pdf, "rb").read(4) == b"%PDF"


def test_color_dimension_2(tmp_path, capsys, monkeypatch):
    monkeypatch.setitem(REPORTED_NEAR_MISSES, 2, (2, 1))
    out = str(tmp_path / "c.json")
    assert run(["color", "--dim", "2", "-k", "3", "--seed", "1", "--out", out, "--no-history"]) == 0
    doc = json.loads(open(out).read())
    assert doc["conflicts"] == 0
    assert doc["colors"] == 3
    assert doc["dimension"] == 2
    assert len(doc["assignment"]) == 6
    printed = capsys.readouterr().out
    assert "near miss: k=2" in printed
    assert "reported near miss: k=2 with 1 conflicts" in printed


def test_near_miss_is_kept_in_the_manifest(tmp_path):
    out = str(tmp_path / "c.json")
    argv = ["color", "--dim", "2", "--seed", "1", "--out", out, "--no-history"]
    assert run(argv) == 0
    first = open(out + ".manifest.json", "rb").read()
    near_miss = json.loads(first)["results"]["near_miss"]
    assert near_miss["k"] == 2 and near_miss["conflicts"] >= 1
    assert run(argv) == 0
    assert open(out + ".manifest.json", "rb").read() == first


def test_color_and_verify_a_dimacs_graph(tmp_path):
    graph = str(tmp_path / "m3.col")
    assert run(["export", "--dim", "3", "--out", graph, "--no-history"]) == 0
    out = str(tmp_path / "c.json")
    assert run(["color", "--graph", graph, "--seed", "4", "--out", out, "--no-history"]) == 0
    doc = json.loads(open(out).read())
    assert doc["dimension"] is None and doc["colors"] == 4
    assert run(["verify", "--graph", graph, "--coloring", out, "--no-history"]) == 0
    assert run(["verify", "--graph", graph, "--coloring", graph, "--no-history"]) == 1


def test_color_is_reproducible(tmp_path):
    out = str(tmp_path / "c.json")
    argv = ["color", "--dim", "6", "--seed", "42", "--max-iters", "3000", "--out", out, "--no-history"]
    assert run(argv) == 0
    first = open(out, "rb").read(), open(out + ".manifest.json", "rb").read()
    assert run(argv) == 0
    second = open(out, "rb").read(), open(out + ".manifest.json", "rb").read()
    assert first == second
    manifest = json.loads(first[1])
    assert manifest["seeds"] == [42]
    assert out in manifest["outputs"]


def test_color_needs_a_seed(tmp_path):
    assert run(["color", "--dim", "2", "--out", str(tmp_path / "c.json"), "--no-history"]) == 1


def test_color_dsatur(tmp_path):
    out = str(tmp_path / "d.json")
    assert run(["color", "--dim", "4", "--strategy", "dsatur", "--out", out, "--no-history"]) == 0
    assert json.loads(open(out).read())["strategy"] == "dsatur"


def test_verify_bad_coloring_fails(tmp_path, capsys):
    bad = str(tmp_path / "bad.json")
    save_coloring(Coloring(assignment=np.zeros(240, dtype=np.int64), k=1, conflicts=0, meta={}), 8, bad)
    assert run(["verify", "--dim", "8", "--coloring", bad, "--no-history"]) == 1
    assert "6840 conflicts" in capsys.readouterr().out


def test_verify_good_coloring(tmp_path):
    out = str(tmp_path / "c.json")
    assert run(["color", "--dim", "3", "--seed", "5", "--out", out, "--no-history"]) == 0
    assert run(["verify", "--dim", "3", "--coloring", out, "--no-history"]) == 0


def test_usage_errors_exit_2():
    assert run(["color", "--dim", "2"]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["stats", "--dim", "8", "--no-history"]) == 2
    assert run(["color", "--seed", "1", "--out", "c.json", "--no-history"]) == 2
    assert run(["counts", "--no-history"]) == 2


def test_invalid_dimension_is_a_usage_error():
    assert run(["slice", "--dim", "30", "--no-history"]) == 2
    assert run(["color", "--dim", "0", "--seed", "1", "--out", "c.json", "--no-history"]) == 2


def test_stats_without_sampling_needs_no_seed(capsys):
    assert run(["stats", "--dim", "4", "--sample", "0", "--no-history"]) == 0
    assert "M_4" in capsys.readouterr().out


def test_slice_names_the_isomorphic_lattice(capsys):
    assert run(["slice", "--dim", "8", "--no-history"]) == 0
    assert "Λ8 ≅ E8" in capsys.readouterr().out


def test_slice_and_enumerate(tmp_path, capsys):
    out = str(tmp_path / "m13.txt")
    assert run(["slice", "--dim", "13", "--out", out, "--no-history"]) == 0
    assert "PASS" in capsys.readouterr().out
    lines = [l for l in open(out).read().splitlines() if not l.startswith("#")]
    assert len(lines) == 906
    assert run(["enumerate", "--dim", "8", "--no-history"]) == 0


def test_stats_small_section(capsys):
    assert run(["stats", "--dim", "8", "--sample", "5", "--seed", "3", "--full-pairs", "--no-history"]) == 0
    assert "diameter^2 = 128" in capsys.readouterr().out


def test_stats_full_set_sample(capsys):
    assert run(["stats", "--sample", "100", "--seed", "1", "--no-history"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_export_and_peel(tmp_path):
    graph = str(tmp_path / "g.col")
    assert run(["export", "--dim", "2", "--format", "dimacs", "--out", graph, "--no-history"]) == 0
    assert open(graph).readline().strip() == "p edge 6 9"
    sets = str(tmp_path / "sets.txt")
    assert run(["peel", "--dim", "16", "-k", "2", "--out", sets, "--no-history"]) == 0
    rows = open(sets).read().splitlines()
    assert len(rows) == 2
    assert all(int(v) >= 1 for v in rows[0].split())


def test_hset_pipeline(tmp_path, capsys):
    dat = str(tmp_path / "h.dat")
    assert run(["hset", "make", "--dim", "24", "--rule", "seed:3", "--out", dat, "--no-history"]) == 0
    assert len(open(dat, "rb").read()) == 589680
    text = str(tmp_path / "h.txt")
    assert run(["hset", "decode", "--in", dat, "--out", text, "--no-history"]) == 0
    again = str(tmp_path / "again.dat")
    assert run(["hset", "encode", "--in", text, "--out", again, "--no-history"]) == 0
    assert open(again, "rb").read() == open(dat, "rb").read()
    assert run(["hset", "validate", "--in", dat, "--no-pairs", "--no-history"]) == 0


def test_hset_make_text_and_color(tmp_path):
    text = str(tmp_path / "h8.txt")
    assert run(["hset", "make", "--dim", "8", "--out", text, "--no-history"]) == 0
    assert run(["hset", "validate", "--in", text, "--no-history"]) == 0
    out = str(tmp_path / "c.json")
    assert run(["color", "--hset", text, "--seed", "2", "--max-iters", "2000", "--out", out, "--no-history"]) == 0
    assert run(["verify", "--hset", text, "--coloring", out, "--no-history"]) == 0


def test_hset_dat_needs_dimension_24(tmp_path):
    assert run(["hset", "make", "--dim", "8", "--out", str(tmp_path / "h.dat"), "--no-history"]) == 1


def test_decode_rejects_truncated_file(tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_bytes(b"\x00" * 12)
    assert run(["hset", "decode", "--in", str(bad), "--out", str(tmp_path / "v.txt"), "--no-history"]) == 1


def test_runs_are_recorded(tmp_path, capsys):
    db = str(tmp_path / "runs.db")
    assert run(["golay", "--db", db]) == 0
    assert run(["hset", "make", "--dim", "8", "--out", str(tmp_path / "h.dat"), "--db", db]) == 1
    records = manager.get_all_records(db_path=db)
    assert [r[3] for r in records] == ["exit-1", "ok"]
    assert records[1][4] is not None
    capsys.readouterr()
    assert run(["history", "--db", db, "--limit", "5"]) == 0
    out = capsys.readouterr().out
    assert "golay" in out and "hset" in out


@pytest.mark.slow
def test_color_dimension_8_reaches_nine(tmp_path):
    out = str(tmp_path / "c8.json")
    assert run(["color", "--dim", "8", "-k", "9", "--seed", "1", "--restarts", "4", "--out", out, "--no-history"]) == 0
    assert json.loads(open(out).read())["colors"] <= 9
