import csv
import json
import math
from itertools import permutations

import numpy as np
import pytest

from localcolor.errors import InputError, InvariantViolation
from localcolor.graph import complete_graph, cycle_graph, petersen_graph
from localcolor import harness
from localcolor.harness import (
    ExperimentConfig,
    frequency,
    mean_stat,
    report_bytes,
    run_ball_degeneracy,
    run_checker_soundness,
    run_construction_pipeline,
    run_experiment,
    run_max_degree_tail,
    run_odd_cycle_R,
    run_reveal_equivalence,
    short_odd_cycles,
    total_variation,
    write_csv,
)


def brute_odd_cycles(g, cap):
    """Count simple odd cycles of length <= cap by checking vertex sequences."""
    found = set()
    for length in range(3, cap + 1, 2):
        for seq in permutations(range(g.n), length):
            if seq[0] != min(seq):
                continue
            if all(g.has_edge(seq[j], seq[(j + 1) % length]) for j in range(length)):
                found.add(min(seq, seq[:1] + seq[1:][::-1]))
    return len(found)


def test_short_odd_cycles():
    assert short_odd_cycles(cycle_graph(5), 12) == 1
    assert short_odd_cycles(cycle_graph(5), 3) == 0
    assert short_odd_cycles(cycle_graph(6), 12) == 0
    assert short_odd_cycles(complete_graph(4), 12) == 4
    assert short_odd_cycles(complete_graph(5), 12) == 10 + 12
    P = petersen_graph()
    assert short_odd_cycles(P, 5) == 12
    for g in (complete_graph(6), P):
        assert short_odd_cycles(g, 7) == brute_odd_cycles(g, 7)


def test_frequency_and_mean():
    f = frequency(3, 10)
    assert f["frequency"] == 0.3 and f["wilson_low"] <= 0.3 <= f["wilson_high"]
    for s in (0, 10):
        f = frequency(s, 10)
        assert 0 <= f["wilson_low"] <= f["frequency"] <= f["wilson_high"] <= 1
    assert frequency(0, 0)["frequency"] is None
    m = mean_stat([1, 2, 3, 4])
    assert m["mean"] == 2.5 and m["stderr"] == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)


def test_total_variation():
    assert total_variation([1, 1, 2], [1, 1, 2]) == 0
    assert total_variation([1, 1], [2, 2]) == 1
    assert total_variation([1, 2], [1, 1]) == pytest.approx(0.5)


def test_config_errors(tmp_path):
    with pytest.raises(InputError):
        ExperimentConfig(kind="nope")
    with pytest.raises(InputError):
        ExperimentConfig(kind="odd_cycle_R", trials=0)
    with pytest.raises(InputError):
        ExperimentConfig(kind="odd_cycle_R", version=2)
    with pytest.raises(InputError):
        ExperimentConfig(kind="odd_cycle_R", n=10)
    with pytest.raises(InputError):
        ExperimentConfig.from_dict({"kind": "odd_cycle_R", "bogus": 1})
    with pytest.raises(InputError):
        ExperimentConfig.from_dict({"ell": 3})
    with pytest.raises(InputError):
        ExperimentConfig.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        ExperimentConfig.load(bad)
    bad.write_text("[1, 2]")
    with pytest.raises(InputError):
        ExperimentConfig.load(bad)
    with pytest.raises(InputError):
        run_odd_cycle_R(ExperimentConfig(kind="ball_degeneracy"))


def test_config_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"version": 1, "kind": "odd_cycle_R", "ell": 3, "c": 3, "r": 1,
                                "scale_cap": 300, "trials": 2, "seed": 4, "budgets": {"color": 1000},
                                "out": None}))
    cfg = ExperimentConfig.load(path)
    assert cfg.scale_cap == 300 and cfg.color_budget == 1000
    assert cfg.instance()[0] == 300


def test_ball_degeneracy_trivial():
    rep = run_ball_degeneracy(ExperimentConfig(kind="ball_degeneracy", n=50, p=0.0, trials=3, centers=10))
    m = rep["metrics"]
    assert m["two_degenerate"]["frequency"] == 1.0 and m["ball_size_max"] == 1
    rep = run_ball_degeneracy(ExperimentConfig(kind="ball_degeneracy", scale_cap=400, trials=3, centers=50))
    m = rep["metrics"]
    assert m["ball_size_max"] <= 400
    assert rep["counters"]["balls"] == 150
    assert sum(m["degeneracy_histogram"].values()) == 150


def test_odd_cycle_report():
    rep = run_odd_cycle_R(ExperimentConfig(kind="odd_cycle_R", n=40, p=0.0, trials=2, centers=5))
    assert rep["metrics"]["non_bipartite_remainder"]["frequency"] == 0
    cfg = ExperimentConfig(kind="odd_cycle_R", n=60, p=0.15, r=1, trials=3, centers=20)
    a, b = run_odd_cycle_R(cfg), run_odd_cycle_R(cfg)
    assert report_bytes(a, drop_clock=True) == report_bytes(b, drop_clock=True)
    assert a["metrics"]["non_bipartite_remainder"]["frequency"] > 0


def test_checker_report_partition():
    rep = run_checker_soundness(ExperimentConfig(kind="checker_soundness", r=2, scale_cap=2000, trials=200))
    m, c = rep["metrics"], rep["counters"]
    assert c["soundness_violations"] == 0
    no = c["sessions"] - m["yes_rate"]["successes"]
    assert sum(m["no_reasons"].values()) == no
    per = sum(sum(lv["no_by_level"].values()) for lv in m["per_level"].values())
    assert per == no
    assert m["false_no"]["successes"] <= no


def test_checker_violation_writes_counterexample(tmp_path, monkeypatch):
    # a checker that always says yes must be caught on a dense instance
    from localcolor.checker import Verdict

    monkeypatch.setattr(harness, "check_two_degenerate", lambda s, p: Verdict("yes"))
    out = tmp_path / "rep.json"
    cfg = ExperimentConfig(kind="checker_soundness", n=12, p=0.9, r=1, trials=3, out=str(out))
    with pytest.raises(InvariantViolation):
        run_experiment(cfg)
    ce = json.loads(out.with_suffix(".counterexample.json").read_text())
    assert ce["verdict"]["answer"] == "yes" and "session" in ce


def test_reveal_equivalence_trivial():
    rep = run_reveal_equivalence(ExperimentConfig(kind="reveal_equivalence", n=20, p=0.0, r=2, trials=50))
    m = rep["metrics"]
    assert m["tv_level_1"] == 0 and m["tv_edge_count"] == 0 and m["tv_joint_levels"] == 0
    rep = run_reveal_equivalence(ExperimentConfig(kind="reveal_equivalence", n=30, p=0.1, r=2, trials=300))
    assert all(rep["metrics"][k] >= 0 for k in ("tv_level_1", "tv_level_2", "tv_edge_count"))


def test_pipeline():
    rep = run_construction_pipeline(ExperimentConfig(kind="construction_pipeline", ell=2, r=1, trials=2))
    m, c = rep["metrics"], rep["counters"]
    assert rep["instance"]["n"] == 192
    assert c["guarantee_violations"] == 0
    assert 0 <= m["deleted_fraction"]["mean"] <= 1
    assert m["measured_local_chi_max"] <= 3
    rep = run_construction_pipeline(ExperimentConfig(kind="construction_pipeline", ell=2, r=1, trials=2, surgery="local4"))
    assert rep["metrics"]["measured_local_chi_max"] <= 4


def test_max_degree_tail():
    rep = run_max_degree_tail(ExperimentConfig(kind="max_degree_tail", n=30, p=0.0, trials=5))
    assert rep["metrics"]["max_degree"]["mean"] == 0
    rep = run_max_degree_tail(ExperimentConfig(kind="max_degree_tail", n=150, p=0.06, trials=400))
    m = rep["metrics"]
    assert abs(m["mean_difference"]) < 3 * m["difference_stderr"]
    exceed = [row["exceed"]["frequency"] for row in m["threshold_scan"]]
    assert all(a >= b for a, b in zip(exceed, exceed[1:]))


def test_report_files_and_csv(tmp_path):
    out = tmp_path / "r.json"
    cfg = ExperimentConfig(kind="odd_cycle_R", n=30, p=0.1, trials=2, centers=5, out=str(out))
    rep = run_experiment(cfg)
    on_disk = json.loads(out.read_text())
    assert on_disk["metrics"] == rep["metrics"]
    assert set(on_disk) == {"version", "kind", "config", "instance", "metrics", "counters", "wall_clock_s"}
    write_csv(rep, tmp_path / "r.csv")
    rows = list(csv.reader(open(tmp_path / "r.csv")))
    assert rows[0] == ["metric", "value"]
    assert ["cycle_cap", "12"] in rows


@pytest.mark.parametrize("kind", harness.KINDS)
def test_parallel_matches_serial(kind):
    base = dict(kind=kind, n=40, p=0.08, r=1, trials=6, centers=10, ell=2)
    a = run_experiment(ExperimentConfig(**base))
    b = run_experiment(ExperimentConfig(**base, workers=2))
    assert a["metrics"] == b["metrics"] and a["counters"] == b["counters"]


def test_frequencies_carry_intervals():
    rep = run_ball_degeneracy(ExperimentConfig(kind="ball_degeneracy", n=80, p=0.05, trials=2, centers=10))

    def walk(x):
        if isinstance(x, dict):
            if "frequency" in x:
                assert x["wilson_low"] <= x["frequency"] <= x["wilson_high"]
            for v in x.values():
                walk(v)

    walk(rep["metrics"])
