"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 solver undecided, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .checker import CheckerParams, check_two_degenerate
from .coloring import (
    DEFAULT_BUDGET,
    chromatic_number,
    degeneracy,
    independence_number,
    local_chromatic_number,
)
from .constructions import (
    bounds,
    clique_expand,
    construct_local5,
    paper_parameters,
    surgery_local3,
    surgery_local4,
)
from .errors import InputError, InvariantViolation, Undecided
from .graph import parse_graph, serialize_graph
from .harness import ExperimentConfig, run_experiment, write_csv
from .random_models import RngStream, begin_reveal, sample_gnp


def _read_graph(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> None:
    if args.n is not None:
        n, p = args.n, args.p
        if p is None:
            raise InputError("--p is required with --n")
    else:
        pp = paper_parameters(args.ell, args.r, args.scale_cap)
        n, p = pp.n, pp.p
    g = sample_gnp(n, p, RngStream(args.seed))
    _emit(serialize_graph(g), args.out)


def cmd_analyze(args) -> None:
    g = _read_graph(args.graph)
    cert = degeneracy(g)
    result = {
        "n": g.n,
        "m": g.edge_count,
        "chi": chromatic_number(g, args.budget),
        "degeneracy": cert.degeneracy,
        "alpha": independence_number(g, "greedy" if args.greedy_alpha else "exact", args.budget),
        "alpha_mode": "greedy" if args.greedy_alpha else "exact",
    }
    if args.r is not None:
        result["r"] = args.r
        result["local_chi"] = local_chromatic_number(g, args.r, args.budget)
    if args.json:
        sys.stdout.write(_dump(result))
    else:
        for k, v in result.items():
            print(f"{k}={v}")


def cmd_construct(args) -> None:
    if args.kind == "local5":
        pp = paper_parameters(args.ell, args.r, args.scale_cap)
        g, report = construct_local5(pp, RngStream(args.seed), args.budget)
        out = {"params": pp.to_json(), "report": report.to_json()}
    else:
        g = _read_graph(args.graph) if args.graph else None
        if g is None:
            pp = paper_parameters(args.ell, args.r, args.scale_cap)
            g = sample_gnp(pp.n, pp.p, RngStream(args.seed))
        if args.kind == "clique-expand":
            g = clique_expand(g, args.k)
            out = {"n": g.n, "m": g.edge_count, "k": args.k}
        else:
            surgery = surgery_local3 if args.kind == "local3" else surgery_local4
            rep = surgery(g, args.r, verify=args.verify, budget=args.budget)
            g = rep.graph
            out = rep.to_json()
    if args.graph_out:
        Path(args.graph_out).write_text(serialize_graph(g))
    _emit(_dump(out), args.out)


def cmd_check(args) -> None:
    if args.n is not None:
        n, p = args.n, args.p
        if p is None:
            raise InputError("--p is required with --n")
    else:
        pp = paper_parameters(args.ell, args.r, args.scale_cap)
        n, p = pp.n, pp.p
    params = CheckerParams(args.ell, args.r, threshold_schedule=args.schedule, degree_mode=args.degree)
    session = begin_reveal(n, p, args.r, RngStream(args.seed))
    verdict = check_two_degenerate(session, params)
    out = {"n": n, "p": p, "seed": args.seed, "verdict": verdict.to_json()}
    if args.transcript:
        session.finish()
        out["transcript"] = session.transcript()
    _emit(_dump(out), args.out)


def cmd_mc(args) -> None:
    cfg = ExperimentConfig.load(args.config)
    if args.out:
        cfg.out = args.out
    if args.workers:
        cfg.workers = args.workers
    report = run_experiment(cfg)
    if args.csv:
        write_csv(report, args.csv)
    if not cfg.out:
        sys.stdout.write(_dump(report))


def cmd_bounds(args) -> None:
    rep = bounds(args.ell, args.c, args.r)
    if args.json:
        sys.stdout.write(_dump(rep.to_json()))
        return
    rows = [
        ("bogdanov_lower", rep.bogdanov_lower),
        ("bogdanov_simple_lower", rep.bogdanov_simple_lower),
        ("f3_upper", rep.f3_upper),
        ("fc_upper", rep.fc_upper),
        ("fc1_lower_shape", rep.fc1_lower_shape),
    ]
    print(f"ell={rep.ell} c={rep.c} r={rep.r}")
    for name, value in rows:
        print(f"{name:<22} {value:.10g}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="localcolor", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({kernels.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)

    def instance_args(p, r_default=1):
        p.add_argument("--ell", type=int, default=3)
        p.add_argument("--r", type=int, default=r_default)
        p.add_argument("--scale-cap", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="sample G(n,p) and write it as an edge list")
    instance_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="chi, local chi, degeneracy and alpha of a graph file")
    p.add_argument("graph", help="edge-list file, or - for stdin")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--greedy-alpha", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", help="local5 sample, local4/local3 surgery or clique expansion")
    p.add_argument("kind", choices=["local5", "local4", "local3", "clique-expand"])
    instance_args(p)
    p.add_argument("--graph", help="input edge list (default: sample G(n,p) at the ell, r defaults)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--graph-out")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="run the reveal-driven 2-degeneracy checker once")
    instance_args(p, r_default=2)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--schedule", choices=["paper_fixed_r", "paper_large_r"], default="paper_fixed_r")
    p.add_argument("--degree", choices=["session", "paper"], default="session")
    p.add_argument("--transcript", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mc", help="run a Monte Carlo campaign from a JSON config")
    p.add_argument("config")
    p.add_argument("-o", "--out")
    p.add_argument("--csv")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("bounds", help="tabulate the bound formulas for f_c(ell, r)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Undecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
