"""Seeded Monte Carlo campaigns and their JSON/CSV reports.

Every trial draws from its own stream ``RngStream(seed, trial_index)`` so
results do not depend on scheduling; trials may run in a process pool and
are folded in index order.
"""

from __future__ import annotations

import csv
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from .checker import CheckerParams, check_two_degenerate
from .coloring import DEFAULT_BUDGET, degeneracy, is_k_degenerate, two_coloring
from .constructions import paper_parameters, surgery_local3, surgery_local4
from .errors import InputError, InvariantViolation
from .graph import Graph, ball
from .random_models import RngStream, begin_reveal, reveal_to_ball, sample_gnp

SCHEMA_VERSION = 1
KINDS = (
    "ball_degeneracy",
    "odd_cycle_R",
    "checker_soundness",
    "reveal_equivalence",
    "construction_pipeline",
    "max_degree_tail",
)


@dataclass
class ExperimentConfig:
    kind: str
    ell: int = 3
    c: int = 3
    r: int = 1
    scale_cap: int | None = None
    trials: int = 20
    seed: int = 0
    budgets: dict = field(default_factory=lambda: {"color": DEFAULT_BUDGET})
    out: str | None = None
    version: int = SCHEMA_VERSION
    # explicit instance size; replaces the (ell, r) derived n and p when set
    n: int | None = None
    p: float | None = None
    centers: int = 100
    cycle_cap: int = 12
    surgery: str = "local3"
    epsilon: float = 1 / 9
    threshold_schedule: str = "paper_fixed_r"
    degree_mode: str = "session"
    workers: int = 1

    def __post_init__(self):
        if self.version != SCHEMA_VERSION:
            raise InputError(f"unsupported config version {self.version}")
        if self.kind not in KINDS:
            raise InputError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.r < 0 or (self.r < 1 and self.kind != "reveal_equivalence"):
            raise InputError(f"r must be at least 1, got {self.r}")
        if (self.n is None) != (self.p is None):
            raise InputError("give both n and p, or neither")
        if self.p is not None and not 0 <= self.p <= 1:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        if self.surgery not in ("local3", "local4"):
            raise InputError(f"surgery must be local3 or local4, got {self.surgery!r}")
        if self.centers < 1 or self.cycle_cap < 3 or self.workers < 1:
            raise InputError("centers >= 1, cycle_cap >= 3 and workers >= 1 required")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise InputError(f"unknown config keys: {sorted(extra)}")
        if "kind" not in data:
            raise InputError("config needs a 'kind'")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InputError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("config must be a JSON object")
        return cls.from_dict(data)

    def instance(self) -> tuple[int, float]:
        if self.n is not None:
            return self.n, self.p
        pp = paper_parameters(self.ell, self.r, self.scale_cap)
        return pp.n, pp.p

    @property
    def color_budget(self) -> int:
        return int(self.budgets.get("color", DEFAULT_BUDGET))


# -- statistics --------------------------------------------------------------


def frequency(successes: int, count: int) -> dict:
    """Point estimate with a Wilson 95% interval."""
    if count == 0:
        return {"count": 0, "successes": 0, "frequency": None, "wilson_low": None, "wilson_high": None}
    lo, hi = proportion_confint(successes, count, alpha=0.05, method="wilson")
    f = successes / count
    return {
        "count": count,
        "successes": successes,
        "frequency": f,
        "wilson_low": min(float(lo), f),
        "wilson_high": max(float(hi), f),
    }


def mean_stat(values) -> dict:
    a = np.asarray(list(values), dtype=float)
    if a.size == 0:
        return {"count": 0, "mean": None, "stderr": None}
    se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
    return {"count": int(a.size), "mean": float(a.mean()), "stderr": se}


def total_variation(a, b) -> float:
    """TV distance between the empirical distributions of two samples."""
    ca, cb = Counter(a), Counter(b)
    na, nb = sum(ca.values()), sum(cb.values())
    return 0.5 * sum(abs(ca[k] / na - cb[k] / nb) for k in set(ca) | set(cb))


# -- per-trial workers (module level so a process pool can pickle them) ------


def _centers(cfg: ExperimentConfig, trial: int, n: int) -> list[int]:
    gen = RngStream(cfg.seed, trial).generator(1)
    k = min(cfg.centers, n)
    return sorted(gen.choice(n, size=k, replace=False).tolist())


def _trial_ball_degeneracy(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    g = sample_gnp(n, p, RngStream(cfg.seed, trial))
    d = n * p
    ref = ((1 + cfg.epsilon) * d) ** cfg.r
    out = {"balls": 0, "deg2": 0, "deg4": 0, "sizes": [], "over_ref": 0, "degeneracy": []}
    for v in _centers(cfg, trial, n):
        b = ball(g, v, cfg.r)
        k = degeneracy(b.subgraph).degeneracy
        out["balls"] += 1
        out["deg2"] += k <= 2
        out["deg4"] += k <= 4
        out["sizes"].append(len(b.vertices))
        out["over_ref"] += len(b.vertices) > ref
        out["degeneracy"].append(k)
    return out


def short_odd_cycles(g: Graph, cap: int) -> int:
    """Number of simple odd cycles of length <= cap (exhaustive, truncated at cap)."""
    count = 0
    for s in range(g.n):
        # cycles whose smallest vertex is s, each found once per direction
        stack = [(s, [s], {s})]
        while stack:
            x, path, on = stack.pop()
            for y in g.adj[x]:
                if y == s and len(path) >= 3:
                    count += len(path) % 2
                elif y > s and y not in on and len(path) < cap:
                    stack.append((y, path + [y], on | {y}))
    return count // 2


def _trial_odd_cycle_R(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    g = sample_gnp(n, p, RngStream(cfg.seed, trial))
    out = {"balls": 0, "odd": 0, "cycles": []}
    for v in _centers(cfg, trial, n):
        rem = ball(g, v, cfg.r).remainder_graph()
        out["balls"] += 1
        out["odd"] += two_coloring(rem) is None
        out["cycles"].append(short_odd_cycles(rem, cfg.cycle_cap))
    return out


def _trial_checker(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    params = CheckerParams(
        cfg.ell, cfg.r, cfg.epsilon, cfg.threshold_schedule, cfg.degree_mode
    )
    session = begin_reveal(n, p, cfg.r, RngStream(cfg.seed, trial))
    verdict = check_two_degenerate(session, params)
    session.finish()
    session.check_invariants()
    truth = is_k_degenerate(reveal_to_ball(session).subgraph, 2)
    if verdict.yes and not truth:
        raise InvariantViolation(
            f"checker said yes on a non-2-degenerate ball (trial {trial})",
            {"trial": trial, "verdict": verdict.to_json(), "session": session.transcript()},
        )
    return {
        "yes": verdict.yes,
        "truth": truth,
        "reason": verdict.reason_kind,
        "level": None if verdict.reason is None else verdict.reason["level"],
        "per_level": [rec.to_json() for rec in verdict.per_level],
    }


def _trial_reveal(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    base = RngStream(cfg.seed, trial)
    s = begin_reveal(n, p, cfg.r, base.child(0))
    s.finish()
    rb = reveal_to_ball(s)
    db = ball(sample_gnp(n, p, base.child(1)), 0, cfg.r)
    return {
        "reveal": [list(rb.level_sizes), rb.subgraph.edge_count],
        "direct": [list(db.level_sizes), db.subgraph.edge_count],
    }


def _trial_pipeline(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    g = sample_gnp(n, p, RngStream(cfg.seed, trial))
    surgery = surgery_local3 if cfg.surgery == "local3" else surgery_local4
    rep = surgery(g, cfg.r, verify=True, budget=cfg.color_budget)
    return {
        "deleted_fraction": rep.deleted_fraction,
        "measured_local_chi": rep.measured_local_chi,
        "guarantee": rep.guarantee,
        "chi_lower_bound": rep.chi_lower_bound,
        "alpha_bound": rep.alpha_bound,
        "alpha_method": rep.alpha_method,
        "undecided": len(rep.undecided_centers),
        "exceeds_ell": (rep.chi_lower_bound or 0) > cfg.ell,
    }


def dense_max_degree(n: int, p: float, gen: np.random.Generator) -> int:
    """Max degree of G(n,p) from a dense Bernoulli adjacency matrix."""
    if n < 2:
        return 0
    upper = np.triu(gen.random((n, n)) < p, k=1)
    deg = upper.sum(axis=0) + upper.sum(axis=1)
    return int(deg.max())


def _trial_max_degree(cfg: ExperimentConfig, trial: int) -> dict:
    n, p = cfg.instance()
    g = sample_gnp(n, p, RngStream(cfg.seed, trial))
    oracle = dense_max_degree(n, p, RngStream(cfg.seed, trial).generator(2))
    return {"max_degree": g.max_degree(), "oracle_max_degree": oracle}


_TRIALS = {
    "ball_degeneracy": _trial_ball_degeneracy,
    "odd_cycle_R": _trial_odd_cycle_R,
    "checker_soundness": _trial_checker,
    "reveal_equivalence": _trial_reveal,
    "construction_pipeline": _trial_pipeline,
    "max_degree_tail": _trial_max_degree,
}


def _run_trials(cfg: ExperimentConfig) -> list[dict]:
    fn = _TRIALS[cfg.kind]
    if cfg.workers == 1:
        return [fn(cfg, t) for t in range(cfg.trials)]
    with ProcessPoolExecutor(cfg.workers) as pool:
        return list(pool.map(fn, [cfg] * cfg.trials, range(cfg.trials), chunksize=16))


# -- folds -------------------------------------------------------------------


def _fold_ball_degeneracy(cfg, rows):
    balls = sum(r["balls"] for r in rows)
    sizes = [s for r in rows for s in r["sizes"]]
    n, p = cfg.instance()
    degs = Counter(k for r in rows for k in r["degeneracy"])
    return {
        "two_degenerate": frequency(sum(r["deg2"] for r in rows), balls),
        "non_two_degenerate": frequency(balls - sum(r["deg2"] for r in rows), balls),
        "four_degenerate": frequency(sum(r["deg4"] for r in rows), balls),
        "ball_size": mean_stat(sizes),
        "ball_size_max": max(sizes),
        "ball_size_reference": ((1 + cfg.epsilon) * n * p) ** cfg.r,
        "ball_size_over_reference": frequency(sum(r["over_ref"] for r in rows), balls),
        "degeneracy_histogram": {str(k): degs[k] for k in sorted(degs)},
    }, {"graphs": len(rows), "balls": balls}


def _fold_odd_cycle(cfg, rows):
    balls = sum(r["balls"] for r in rows)
    cycles = [c for r in rows for c in r["cycles"]]
    return {
        "non_bipartite_remainder": frequency(sum(r["odd"] for r in rows), balls),
        "odd_cycles_up_to_cap": mean_stat(cycles),
        "cycle_cap": cfg.cycle_cap,
    }, {"graphs": len(rows), "balls": balls}


def _fold_checker(cfg, rows):
    total = len(rows)
    yes = sum(r["yes"] for r in rows)
    no_rows = [r for r in rows if not r["yes"]]
    false_no = sum(r["truth"] for r in no_rows)
    reasons = Counter(r["reason"] for r in no_rows)
    by_level: dict[str, dict] = {}
    for i in range(1, cfg.r + 1):
        recs = [rec for r in rows for rec in r["per_level"] if rec["i"] == i]
        hs = [rec for rec in recs if rec["h_i"] is not None]
        by_level[str(i)] = {
            "reached": len(recs),
            "c_i": mean_stat(rec["c_i"] for rec in recs),
            "i_cycle": frequency(sum(rec["c_i"] > 0 for rec in recs), len(recs)),
            "h_i": mean_stat(rec["h_i"] for rec in hs),
            "b_i": mean_stat(rec["b_i"] for rec in hs),
            "horseshoe_overflow": frequency(sum(rec["h_i"] > rec["b_i"] for rec in hs), len(hs)),
            "deleted": mean_stat(rec["deleted"] for rec in hs),
            "no_by_level": {
                k: sum(1 for r in no_rows if r["reason"] == k and r["level"] == i)
                for k in ("level_growth", "i_cycle", "horseshoe_overflow")
            },
        }
    metrics = {
        "yes_rate": frequency(yes, total),
        "truly_two_degenerate": frequency(sum(r["truth"] for r in rows), total),
        "false_no": frequency(false_no, total),
        "false_no_given_no": frequency(false_no, len(no_rows)),
        "no_reasons": {k: reasons.get(k, 0) for k in ("level_growth", "i_cycle", "horseshoe_overflow")},
        "per_level": by_level,
    }
    return metrics, {"sessions": total, "soundness_violations": 0}


def _fold_reveal(cfg, rows):
    out = {}
    for j in range(1, cfg.r + 1):
        a = [r["reveal"][0][j] for r in rows]
        b = [r["direct"][0][j] for r in rows]
        out[f"tv_level_{j}"] = total_variation(a, b)
        out[f"level_{j}_mean_reveal"] = mean_stat(a)
        out[f"level_{j}_mean_direct"] = mean_stat(b)
    a = [r["reveal"][1] for r in rows]
    b = [r["direct"][1] for r in rows]
    out["tv_edge_count"] = total_variation(a, b)
    out["edge_count_mean_reveal"] = mean_stat(a)
    out["edge_count_mean_direct"] = mean_stat(b)
    out["tv_joint_levels"] = total_variation(
        [tuple(r["reveal"][0]) for r in rows], [tuple(r["direct"][0]) for r in rows]
    )
    return out, {"trials_per_side": len(rows)}


def _fold_pipeline(cfg, rows):
    decided = [r for r in rows if r["measured_local_chi"] is not None]
    violations = sum(r["measured_local_chi"] > r["guarantee"] for r in decided)
    return {
        "deleted_fraction": mean_stat(r["deleted_fraction"] for r in rows),
        "measured_local_chi_max": max((r["measured_local_chi"] for r in decided), default=None),
        "chi_lower_bound": mean_stat(r["chi_lower_bound"] for r in rows),
        "chi_lower_bound_exceeds_ell": frequency(sum(r["exceeds_ell"] for r in rows), len(rows)),
        "alpha_bound": mean_stat(r["alpha_bound"] for r in rows),
        "alpha_methods": dict(Counter(r["alpha_method"] for r in rows)),
        "guarantee": rows[0]["guarantee"],
        "pairs": [[r["measured_local_chi"], r["chi_lower_bound"]] for r in rows],
    }, {"graphs": len(rows), "guarantee_violations": violations, "undecided_balls": sum(r["undecided"] for r in rows)}


def _fold_max_degree(cfg, rows):
    n, p = cfg.instance()
    d = n * p
    ours = [r["max_degree"] for r in rows]
    oracle = [r["oracle_max_degree"] for r in rows]
    mo, mr = mean_stat(ours), mean_stat(oracle)
    se = math.hypot(mo["stderr"] or 0.0, mr["stderr"] or 0.0)
    scan = []
    for step in range(11):
        thr = d * (1 + step / 10)
        scan.append({"threshold": thr, "exceed": frequency(sum(x >= thr for x in ours), len(ours))})
    return {
        "max_degree": mo,
        "oracle_max_degree": mr,
        "mean_difference": mo["mean"] - mr["mean"],
        "difference_stderr": se,
        "exceeds_reference": frequency(sum(x >= (1 + cfg.epsilon) * d for x in ours), len(ours)),
        "reference": (1 + cfg.epsilon) * d,
        "threshold_scan": scan,
    }, {"graphs": len(rows)}


_FOLDS = {
    "ball_degeneracy": _fold_ball_degeneracy,
    "odd_cycle_R": _fold_odd_cycle,
    "checker_soundness": _fold_checker,
    "reveal_equivalence": _fold_reveal,
    "construction_pipeline": _fold_pipeline,
    "max_degree_tail": _fold_max_degree,
}


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run one campaign and return its report (also written to ``cfg.out``)."""
    start = time.perf_counter()
    try:
        rows = _run_trials(cfg)
    except InvariantViolation as exc:
        if cfg.out and exc.transcript is not None:
            Path(cfg.out).with_suffix(".counterexample.json").write_text(
                json.dumps(exc.transcript, indent=2, sort_keys=True)
            )
        raise
    metrics, counters = _FOLDS[cfg.kind](cfg, rows)
    n, p = cfg.instance()
    report = {
        "version": SCHEMA_VERSION,
        "kind": cfg.kind,
        "config": asdict(cfg),
        "instance": {"n": n, "p": p, "d": n * p},
        "metrics": metrics,
        "counters": counters,
        "wall_clock_s": time.perf_counter() - start,
    }
    if cfg.out:
        write_report(report, cfg.out)
    return report


def run_ball_degeneracy(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "ball_degeneracy"))


def run_odd_cycle_R(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "odd_cycle_R"))


def run_checker_soundness(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "checker_soundness"))


def run_reveal_equivalence(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "reveal_equivalence"))


def run_construction_pipeline(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "construction_pipeline"))


def run_max_degree_tail(cfg: ExperimentConfig) -> dict:
    return run_experiment(_as(cfg, "max_degree_tail"))


def _as(cfg: ExperimentConfig, kind: str) -> ExperimentConfig:
    if cfg.kind != kind:
        raise InputError(f"config kind is {cfg.kind!r}, expected {kind!r}")
    return cfg


def report_bytes(report: dict, *, drop_clock: bool = False) -> bytes:
    if drop_clock:
        report = {k: v for k, v in report.items() if k != "wall_clock_s"}
    return json.dumps(report, indent=2, sort_keys=True).encode()


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_bytes(report_bytes(report))


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, x in enumerate(obj):
            _flatten(f"{prefix}[{i}]", x, rows)
    else:
        rows.append((prefix, obj))


def write_csv(report: dict, path: str | Path) -> None:
    """One ``metric,value`` row per leaf of the report's metrics."""
    rows: list = []
    _flatten("", report["metrics"], rows)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "value"])
        w.writerows(rows)
