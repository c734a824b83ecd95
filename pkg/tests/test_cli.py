import json

import pytest

from localcolor.cli import main
from localcolor.graph import parse_graph, petersen_graph, serialize_graph


@pytest.fixture
def petersen_file(tmp_path):
    path = tmp_path / "petersen.el"
    path.write_text(serialize_graph(petersen_graph()))
    return path


def test_bounds_table(capsys):
    assert main(["bounds", "--ell", "6", "--c", "2", "--r", "1"]) == 0
    assert "3.9375" in capsys.readouterr().out
    assert main(["bounds", "--ell", "3", "--c", "3", "--r", "1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["f3_upper"] == pytest.approx(1086.2540647)


def test_bounds_domain_error(capsys):
    assert main(["bounds", "--ell", "2", "--c", "3", "--r", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_analyze(petersen_file, capsys):
    assert main(["analyze", str(petersen_file), "--r", "1"]) == 0
    out = capsys.readouterr().out.split()
    for item in ("chi=3", "degeneracy=3", "alpha=4", "local_chi=2"):
        assert item in out


def test_analyze_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.el"
    bad.write_text("3\n0 0\n")
    assert main(["analyze", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "none.el")]) == 1


def test_analyze_undecided(tmp_path, capsys):
    from conftest import random_graph
    import random

    path = tmp_path / "dense.el"
    path.write_text(serialize_graph(random_graph(random.Random(2), 50, 0.5)))
    assert main(["analyze", str(path), "--budget", "50", "--greedy-alpha"]) == 2
    assert "undecided" in capsys.readouterr().err


def test_mc_missing(capsys):
    assert main(["mc", "missing-file.json"]) == 1
    assert "missing-file.json" in capsys.readouterr().err


def test_mc_runs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "odd_cycle_R", "n": 30, "p": 0.1, "trials": 2, "centers": 5}))
    out, table = tmp_path / "rep.json", tmp_path / "rep.csv"
    assert main(["mc", str(cfg), "-o", str(out), "--csv", str(table)]) == 0
    assert json.loads(out.read_text())["kind"] == "odd_cycle_R"
    assert table.read_text().startswith("metric,value")


def test_mc_invariant_violation_exit(tmp_path, monkeypatch):
    from localcolor import harness
    from localcolor.checker import Verdict

    monkeypatch.setattr(harness, "check_two_degenerate", lambda s, p: Verdict("yes"))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "checker_soundness", "n": 12, "p": 0.9, "trials": 2}))
    assert main(["mc", str(cfg)]) == 3


def test_gen_and_construct(tmp_path, capsys):
    g_path = tmp_path / "g.el"
    assert main(["gen", "--ell", "3", "--r", "1", "--scale-cap", "200", "--seed", "3", "-o", str(g_path)]) == 0
    g = parse_graph(g_path.read_text())
    assert g.n == 200
    assert main(["gen", "--n", "20"]) == 1
    capsys.readouterr()
    for kind, bound in (("local3", 3), ("local4", 4)):
        rep_path = tmp_path / f"{kind}.json"
        assert main(["construct", kind, "--graph", str(g_path), "--verify", "-o", str(rep_path)]) == 0
        rep = json.loads(rep_path.read_text())
        assert rep["measured_local_chi"] <= bound
    out = tmp_path / "x.el"
    assert main(["construct", "clique-expand", "--graph", str(g_path), "--k", "2", "--graph-out", str(out)]) == 0
    assert parse_graph(out.read_text()).n == 400
    capsys.readouterr()
    assert main(["construct", "local5", "--ell", "3", "--scale-cap", "300"]) == 0
    assert json.loads(capsys.readouterr().out)["report"]["n"] == 300


def test_check(capsys):
    assert main(["check", "--n", "5", "--p", "1", "--r", "1", "--transcript"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"]["reason"]["kind"] == "i_cycle"
    assert data["transcript"]["levels"][1] == [1, 2, 3, 4]
    assert main(["check", "--ell", "3", "--r", "2", "--scale-cap", "5000", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"]["answer"] in ("yes", "no")
