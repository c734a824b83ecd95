"""Random-graph parameters, deletion surgeries, clique expansion and bounds.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coloring import (
    DEFAULT_BUDGET,
    Coloring,
    alpha_upper_bound,
    chi_lower_bound_via_alpha,
    find_k_coloring,
    independence_number,
    is_k_degenerate,
    local_chromatic_number,
    product_coloring,
    two_coloring,
    degeneracy,
)
from .errors import InputError, InvariantViolation, Undecided
from .graph import Graph, ball, delete_vertices
from .random_models import RngStream, sample_gnp

# graphs up to this size get an exact independence number
EXACT_ALPHA_LIMIT = 60


@dataclass(frozen=True)
class PaperParams:
    ell: int
    radius: int
    n: int
    p: float
    scale_cap: int | None = None

    @property
    def d(self) -> float:
        return self.n * self.p

    @property
    def reference_degree(self) -> float:
        return 3 * self.ell * math.log(self.ell)

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "r": self.radius,
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "reference_degree": self.reference_degree,
            "scale_cap": self.scale_cap,
        }


def paper_parameters(ell: int, r: int, scale_cap: int | None = None) -> PaperParams:
    """n = floor((10 ell ln ell)^(r+1)), p = 0.3 (10 ell ln ell)^(-r).

    With ``scale_cap``, n is capped and p rescaled so that n p = 3 ell ln ell.
    """
    if ell < 2:
        raise InputError(f"ell must be at least 2, got {ell}")
    if r < 1:
        raise InputError(f"r must be at least 1, got {r}")
    base = 10 * ell * math.log(ell)
    n = math.floor(base ** (r + 1))
    p = 0.3 * base ** (-r)
    if scale_cap is not None:
        if scale_cap < 2:
            raise InputError(f"scale_cap must be at least 2, got {scale_cap}")
        if scale_cap < n:
            n = scale_cap
            p = 3 * ell * math.log(ell) / n
            if p >= 1:
                raise InputError(f"scale_cap {scale_cap} too small: p = {p:.3f} >= 1")
    return PaperParams(ell, r, n, p, scale_cap)


def _alpha_bound(g: Graph, budget: int) -> tuple[int, str]:
    if g.n <= EXACT_ALPHA_LIMIT:
        try:
            return independence_number(g, "exact", budget), "exact"
        except Undecided:
            pass
    return alpha_upper_bound(g), "clique_cover"


@dataclass
class Local5Report:
    n: int
    edges: int
    max_degree: int
    max_ball_size: int
    non_4_degenerate_balls: int
    non_2_degenerate_balls: int
    alpha_bound: int
    alpha_method: str
    chi_lower_bound: int
    alpha_greedy: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def construct_local5(params: PaperParams, rng: RngStream, budget: int = DEFAULT_BUDGET):
    """Sample G(n,p) at ``params`` and measure its r-balls' degeneracy."""
    g = sample_gnp(params.n, params.p, rng)
    max_ball = 0
    bad4 = bad2 = 0
    for v in range(g.n):
        b = ball(g, v, params.radius)
        max_ball = max(max_ball, len(b.vertices))
        k = degeneracy(b.subgraph).degeneracy
        bad4 += k > 4
        bad2 += k > 2
    alpha, method = _alpha_bound(g, budget)
    report = Local5Report(
        n=g.n,
        edges=g.edge_count,
        max_degree=g.max_degree(),
        max_ball_size=max_ball,
        non_4_degenerate_balls=bad4,
        non_2_degenerate_balls=bad2,
        alpha_bound=alpha,
        alpha_method=method,
        chi_lower_bound=chi_lower_bound_via_alpha(g, max(alpha, 1)),
        alpha_greedy=independence_number(g, "greedy"),
    )
    return g, report


@dataclass
class SurgeryReport:
    n: int
    r: int
    deleted_centers: list[int]
    graph: Graph
    kept: list[int]
    guarantee: int
    measured_local_chi: int | None = None
    chi_lower_bound: int | None = None
    alpha_bound: int | None = None
    alpha_method: str | None = None
    undecided_centers: list[int] = field(default_factory=list)

    @property
    def deleted_fraction(self) -> float:
        return len(self.deleted_centers) / self.n if self.n else 0.0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "deleted_centers": self.deleted_centers,
            "deleted_fraction": self.deleted_fraction,
            "surviving_n": self.graph.n,
            "guarantee": self.guarantee,
            "measured_local_chi": self.measured_local_chi,
            "chi_lower_bound": self.chi_lower_bound,
            "alpha_bound": self.alpha_bound,
            "alpha_method": self.alpha_method,
            "undecided_centers": self.undecided_centers,
        }


def _verify_local(rep: SurgeryReport, k: int, budget: int) -> None:
    """Exact check that every ball of the surviving graph is k-colourable."""
    g = rep.graph
    for v in range(g.n):
        sub = ball(g, v, rep.r).subgraph
        try:
            ok = find_k_coloring(sub, k, budget) is not None
        except Undecided:
            rep.undecided_centers.append(rep.kept[v])
            continue
        if not ok:
            raise InvariantViolation(
                f"ball around surviving vertex {rep.kept[v]} is not {k}-colourable"
            )
    if not rep.undecided_centers:
        rep.measured_local_chi = local_chromatic_number(g, rep.r, budget)


def _with_chi_bound(rep: SurgeryReport, budget: int) -> None:
    alpha, method = _alpha_bound(rep.graph, budget)
    rep.alpha_bound, rep.alpha_method = alpha, method
    rep.chi_lower_bound = chi_lower_bound_via_alpha(rep.graph, max(alpha, 1))


def odd_remainder_centers(g: Graph, r: int) -> list[int]:
    """Centres whose ball remainder (ball edges minus BFS tree) is not bipartite."""
    return [v for v in range(g.n) if two_coloring(ball(g, v, r).remainder_graph()) is None]


def surgery_local4(g: Graph, r: int, verify: bool = False, budget: int = DEFAULT_BUDGET) -> SurgeryReport:
    """Delete every centre whose remainder graph has an odd cycle.

    Every surviving ball then 4-colours as (tree 2-colouring) x (remainder
    2-colouring). Classification is against the original graph.
    """
    bad = odd_remainder_centers(g, r)
    rest, kept = delete_vertices(g, bad)
    rep = SurgeryReport(n=g.n, r=r, deleted_centers=bad, graph=rest, kept=kept, guarantee=4)
    if verify:
        _verify_local(rep, 4, budget)
        _with_chi_bound(rep, budget)
    return rep


def surgery_local3(g: Graph, r: int, verify: bool = False, budget: int = DEFAULT_BUDGET) -> SurgeryReport:
    """Delete every centre whose r-ball is not 2-degenerate."""
    bad = [v for v in range(g.n) if not is_k_degenerate(ball(g, v, r).subgraph, 2)]
    rest, kept = delete_vertices(g, bad)
    rep = SurgeryReport(n=g.n, r=r, deleted_centers=bad, graph=rest, kept=kept, guarantee=3)
    if verify:
        _verify_local(rep, 3, budget)
        _with_chi_bound(rep, budget)
    return rep


def product_witness(g: Graph, original: Graph, kept: list[int], v: int, r: int) -> Coloring:
    """4-colouring of the ball around ``v`` in ``g`` built from the original ball's T/R split.

    ``g`` is the surviving graph of :func:`surgery_local4` on ``original`` and
    ``kept`` maps its ids back. Raises if the remainder is not bipartite.
    """
    big = ball(original, kept[v], r)
    small = ball(g, v, r)
    pos = {x: i for i, x in enumerate(big.vertices)}
    idx = [pos[kept[x]] for x in small.vertices]
    sel = set(idx)
    tree = Graph(len(big.vertices), [e for e in big.tree_edges if e[0] in sel and e[1] in sel])
    rem = Graph(len(big.vertices), [e for e in big.remainder_edges if e[0] in sel and e[1] in sel])
    ct, cr = two_coloring(tree), two_coloring(rem)
    if ct is None or cr is None:
        raise InvariantViolation(f"tree or remainder of ball {kept[v]} is not bipartite")
    full = product_coloring(ct, cr)
    return Coloring(tuple(full.colors[i] for i in idx), full.palette_size)


def clique_expand(g: Graph, k: int) -> Graph:
    """Blow every vertex up to a k-clique; cliques of adjacent vertices are fully joined.

    Vertex ``(v, a)`` becomes ``v * k + a``.
    """
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    adj: list[list[int]] = []
    for v in range(g.n):
        outside = [u * k + b for u in g.adj[v] for b in range(k)]
        for a in range(k):
            inside = [v * k + b for b in range(k) if b != a]
            adj.append(inside + outside)
    return Graph.from_adjacency(adj)


@dataclass(frozen=True)
class BoundsReport:
    ell: int
    c: int
    r: int
    bogdanov_lower: float
    bogdanov_simple_lower: float
    f3_upper: float
    fc_upper: float
    fc1_lower_shape: float

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "c": self.c,
            "r": self.r,
            "bogdanov_lower": self.bogdanov_lower,
            "bogdanov_simple_lower": self.bogdanov_simple_lower,
            "f3_upper": self.f3_upper,
            "fc_upper": self.fc_upper,
            "fc1_lower_shape": self.fc1_lower_shape,
            "notes": {
                "bogdanov_lower": "lower bound on f_c(ell, r), valid for all ell >= c >= 2, r >= 1",
                "f3_upper": "(10 ell ln ell)^(r+1); asymptotic upper bound on f_3 for large ell",
                "fc_upper": "(30 ell ln ell)^(r+1) / c^r; asymptotic upper bound on f_c",
                "fc1_lower_shape": "ell^2 ln ell / (c ln c); shape only, unknown constant set to 1",
            },
        }


def bounds(ell: int, c: int, r: int) -> BoundsReport:
    if c < 2 or ell < c:
        raise InputError(f"need ell >= c >= 2, got ell={ell}, c={c}")
    if r < 1:
        raise InputError(f"r must be at least 1, got {r}")
    x = ell / c
    prod = 1.0
    for j in range(r + 1):
        prod *= x + r / 2 + j
    lower = prod / (r + 1) ** (r + 1)
    simple = ((x + r / 2) / (r + 1)) ** (r + 1)
    L = math.log(ell)
    return BoundsReport(
        ell=ell,
        c=c,
        r=r,
        bogdanov_lower=lower,
        bogdanov_simple_lower=simple,
        f3_upper=(10 * ell * L) ** (r + 1),
        fc_upper=(30 * ell * L) ** (r + 1) / c**r,
        fc1_lower_shape=ell**2 * L / (c * math.log(c)),
    )
