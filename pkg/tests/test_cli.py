from __future__ import annotations

import json
from pathlib import Path

import pytest

from ramseymult.cli import RECIPES, main
from ramseymult.named import SCHLAEFLI

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_density_schlaefli(capsys):
    code, out, _ = run(capsys, "density", "--graph6", SCHLAEFLI, "--s", "3", "--t", "4")
    assert code == 0 and out.strip() == "x=41/729 y=320/6561 sum=689/6561"


def test_density_json_out(capsys, tmp_path):
    out_path = tmp_path / "d.json"
    code, _, _ = run(capsys, "density", "--named", "k2", "--s", "3", "--t", "3", "--out", str(out_path))
    assert code == 0 and json.loads(out_path.read_text())["sum"] == "1/4"


def test_graph_json_input(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}))
    code, out, _ = run(capsys, "count", "--graph-json", str(path), "--t", "2", "3")
    assert code == 0 and out.split() == ["k2=3", "k3=1"]


def test_cost_and_weights(capsys):
    code, out, _ = run(capsys, "cost", "--named", "schlaefli", "--complement", "--s", "5", "--t", "3")
    assert code == 0 and out.strip() == "cost=24011/531441"
    code, out, _ = run(capsys, "cost", "--named", "k2", "--s", "3", "--t", "3", "--weights", "1/3,2/3")
    assert code == 0 and out.strip() == "cost=1/3"
    code, _, err = run(capsys, "cost", "--named", "k2", "--s", "3", "--t", "3", "--weights", "1/3,1/3")
    assert code == 2 and "error" in err


def test_search_exhaustive_and_resume(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    code, out, _ = run(capsys, "search", "--space", "cayley:13", "--s", "4", "--t", "5", "--lam", "1000000",
                       "--algorithm", "exhaustive", "--checkpoint", str(ck))
    assert code == 0 and out.startswith("cost=29/2197")
    code, out, _ = run(capsys, "search", "--space", "cayley:13", "--s", "4", "--t", "5", "--lam", "1000000",
                       "--iterations", "5", "--resume", str(ck))
    assert code == 0 and out.startswith("cost=29/2197")
    code, _, err = run(capsys, "search", "--space", "graph:8", "--s", "4", "--t", "5", "--resume", str(ck))
    assert code == 2 and "checkpoint" in err


def test_search_log_and_trace_plot(capsys, tmp_path):
    log, png = tmp_path / "run.jsonl", tmp_path / "trace.png"
    code, _, _ = run(capsys, "search", "--space", "graph:6", "--s", "3", "--t", "3", "--algorithm", "sa",
                     "--iterations", "200", "--log", str(log), "--trace-plot", str(png))
    assert code == 0 and log.read_text().strip() and png.stat().st_size > 0


def test_search_bad_space(capsys):
    code, _, err = run(capsys, "search", "--space", "torus:3", "--s", "3", "--t", "3")
    assert code == 2 and "--space" in err


def test_verify_cert(capsys):
    code, out, _ = run(capsys, "verify-cert", str(DATA / "toy_c3.json"), "--expect", "1/4", "--table")
    assert code == 0 and "bound=1/4" in out and "sharp=4/4" in out
    code, out, _ = run(capsys, "sharp", str(DATA / "toy_c3.json"))
    assert code == 0 and len(out.split()) == 4


def test_verify_cert_failures(capsys, tmp_path):
    code, _, err = run(capsys, "verify-cert", str(DATA / "not_psd.json"))
    assert code == 1 and "not positive semidefinite" in err
    code, _, _ = run(capsys, "verify-cert", str(tmp_path / "missing.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "verify-cert", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "verify-cert", str(DATA / "toy_c3.json"), "--expect", "1/3")
    assert code == 1


def test_unknown_flag_suggestion(capsys):
    code, _, err = run(capsys, "density", "--named", "k2", "--s", "3", "--t", "3", "--weigths", "1/2,1/2")
    assert code == 2 and "--weights" in err
    code, _, err = run(capsys, "density", "--named", "k2", "--s", "3", "--tt", "3")
    assert code == 2 and "did you mean --t" in err


def test_bad_graph6(capsys):
    code, _, err = run(capsys, "count", "--graph6", "A", "--t", "2")
    assert code == 2 and "offset" in err


def test_stability_command(capsys):
    code, out, _ = run(capsys, "stability", "--named", "ramsey13", "--pattern", "DrK")
    assert "embeddings=" in out
    code, out, _ = run(capsys, "stability", "--named", "schlaefli", "--one-based", "--symmetry",
                       "--set", "1,2,4,6,7", "--set", "1,2,12,13,14", "--set", "1,2,4,6,12")
    assert code == 0 and "symmetry_structural=True" in out


def test_region_report_writes_figures(capsys, tmp_path):
    code, out, _ = run(capsys, "region", "--s", "3", "--t", "4", "--grid", "21", "--constructions",
                       "--bound", "689/6561", "--out-dir", str(tmp_path))
    assert code == 0 and out.startswith("x,y,source")
    assert (tmp_path / "region_34.csv").read_text() == out
    assert (tmp_path / "region_34.png").stat().st_size > 0
    assert (tmp_path / "region_34_zoom.png").stat().st_size > 0


def test_xor_and_ap(capsys):
    code, out, _ = run(capsys, "xor", "--factor", "k3", "--factor", "matching:4", "--factor", "matching:4",
                       "--factor", "matching:4", "--s", "5", "--t", "5")
    assert code == 0 and "sum=36499/21233664" in out
    code, out, _ = run(capsys, "ap", "--preset", "z44", "--k", "5")
    assert code == 0 and "bound=1/48" in out
    code, out, _ = run(capsys, "ap", "--coloring", "*000*000", "--k", "3")
    assert code == 1


@pytest.mark.parametrize("name", ["goodman", "c34-schlafli", "g45-ramsey13", "flag-toy-c3", "ap-z44"])
def test_reproduce(capsys, name):
    code, out, _ = run(capsys, "reproduce", name)
    assert code == 0 and "MISMATCH" not in out


def test_reproduce_list_and_unknown(capsys):
    code, out, _ = run(capsys, "reproduce", "list")
    assert code == 0 and set(out.split()) == set(RECIPES)
    code, _, err = run(capsys, "reproduce", "goodmann")
    assert code == 2 and "goodman" in err


def test_reproduce_mismatch_exit(capsys, monkeypatch):
    from fractions import Fraction
    from ramseymult import cli
    monkeypatch.setitem(cli.RECIPES, "goodman", lambda args: [cli._expect("c3", Fraction(1, 5), Fraction(1, 4))])
    code, out, _ = run(capsys, "reproduce", "goodman")
    assert code == 1 and "expected 1/4, computed 1/5" in out
