"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads mirror the hot paths of the Monte Carlo campaigns: r-ball BFS and
degeneracy peeling over every vertex of a G(n,p) sample at (ell=3, r=2), and exact
colouring of the resulting balls.
"""

import argparse
import time

from localcolor import kernels
from localcolor.constructions import paper_parameters
from localcolor.graph import ball
from localcolor.random_models import RngStream, sample_gnp


def workloads():
    pp = paper_parameters(3, 2, scale_cap=3000)
    g = sample_gnp(pp.n, pp.p, RngStream(7))
    indptr, indices = g.csr
    balls = [ball(g, v, 2).subgraph for v in range(0, g.n, 10)]
    dense = sample_gnp(45, 0.3, RngStream(8))

    def bfs(mod):
        for v in range(g.n):
            mod.bfs_ball(indptr, indices, v, 2)

    def peel(mod):
        for b in balls:
            mod.core_order(*b.csr)

    def color(mod):
        for b in balls:
            mod.dsatur_search(*b.csr, 3, 10**7)

    def color_dense(mod):
        for k in range(4, 8):
            mod.dsatur_search(*dense.csr, k, 10**7)

    return [
        (f"bfs_ball r=2, all {g.n} centres", bfs),
        (f"core_order on {len(balls)} balls", peel),
        (f"dsatur_search k=3 on {len(balls)} balls", color),
        ("dsatur_search k=4..7 on G(45, 0.3)", color_dense),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python fallback is available")
    names = sorted(backends)
    print(f"{'workload':<42}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in workloads():
        best = {}
        for name in names:
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn(backends[name])
                times.append(time.perf_counter() - t0)
            best[name] = min(times)
        speed = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{label:<42}" + "".join(f"{best[n]:>11.4f}s" for n in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
