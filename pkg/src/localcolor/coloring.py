"""Exact and heuristic solvers: colouring, degeneracy, odd cycles, independence.

Exact solvers take a node ``budget`` and raise :class:`Undecided` when it runs
out instead of hanging. Conventions on the empty graph: chi = alpha =
degeneracy = 0.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .errors import InputError, Undecided
from .graph import Graph, ball, induced_subgraph

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    palette_size: int

    def is_proper(self, g: Graph) -> bool:
        if len(self.colors) != g.n:
            return False
        if any(not 0 <= c < self.palette_size for c in self.colors):
            return False
        return all(self.colors[u] != self.colors[v] for u, v in g.edges())

    def to_json(self) -> list[int]:
        return list(self.colors)


@dataclass(frozen=True)
class DegeneracyCertificate:
    degeneracy: int
    order: tuple[int, ...]

    def later_degrees(self, g: Graph) -> list[int]:
        pos = {v: i for i, v in enumerate(self.order)}
        return [sum(1 for u in g.adj[v] if pos[u] > pos[v]) for v in self.order]

    def certifies(self, g: Graph) -> bool:
        """Each vertex has at most ``degeneracy`` neighbours later in the order."""
        if sorted(self.order) != list(range(g.n)):
            return False
        return all(d <= self.degeneracy for d in self.later_degrees(g))

    def to_json(self) -> dict:
        return {"degeneracy": self.degeneracy, "order": list(self.order)}


def canonical(colors: Sequence[int]) -> tuple[int, ...]:
    """Relabel colour classes in order of first occurrence."""
    remap: dict[int, int] = {}
    return tuple(remap.setdefault(c, len(remap)) for c in colors)


# -- colouring ---------------------------------------------------------------


def _component_graphs(g: Graph):
    for comp in g.components():
        if len(comp) == g.n:
            yield g, list(range(g.n))
        else:
            sub, back = induced_subgraph(g, comp)
            yield sub, back


def find_k_coloring(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> Coloring | None:
    """A proper k-colouring of ``g`` or None; exact, component by component."""
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    if g.n == 0:
        return Coloring((), 0)
    colors = [0] * g.n
    nodes = 0
    for sub, back in _component_graphs(g):
        if sub.edge_count == 0:
            continue
        indptr, indices = sub.csr
        status, col, used = kernels.dsatur_search(indptr, indices, k, budget - nodes)
        nodes += used
        if status == kernels.STATUS_BUDGET:
            raise Undecided(f"{k}-colourability undecided after {nodes} search nodes", nodes)
        if status == kernels.STATUS_NO:
            return None
        for i, c in enumerate(col):
            colors[back[i]] = c
    colors = canonical(colors)
    return Coloring(colors, max(colors) + 1)


def is_k_colorable(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> bool:
    return find_k_coloring(g, k, budget) is not None


def greedy_coloring(g: Graph) -> Coloring:
    """DSatur heuristic colouring; an upper bound on chi."""
    if g.n == 0:
        return Coloring((), 0)
    indptr, indices = g.csr
    colors = canonical(kernels.dsatur_greedy(indptr, indices))
    return Coloring(colors, max(colors) + 1)


def greedy_clique(g: Graph) -> list[int]:
    """A maximal clique grown greedily from every start vertex; the largest wins."""
    best: list[int] = []
    adjsets = [set(a) for a in g.adj]
    for s in sorted(range(g.n), key=lambda v: -len(g.adj[v])):
        if len(g.adj[s]) + 1 <= len(best):
            break
        clique = [s]
        cand = set(adjsets[s])
        while cand:
            v = max(cand, key=lambda x: (len(adjsets[x] & cand), -x))
            clique.append(v)
            cand &= adjsets[v]
        if len(clique) > len(best):
            best = clique
    return best


def chromatic_number(g: Graph, budget: int = DEFAULT_BUDGET) -> int:
    """Exact chi, bracketed by a greedy clique and a DSatur colouring."""
    if g.n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    chi = 1
    remaining = budget
    for sub, _ in _component_graphs(g):
        if sub.edge_count == 0:
            continue
        if find_odd_cycle(sub) is None:
            chi = max(chi, 2)
            continue
        upper = greedy_coloring(sub).palette_size
        lower = max(3, len(greedy_clique(sub)), chi)
        k = lower
        while k < upper:
            indptr, indices = sub.csr
            status, _, used = kernels.dsatur_search(indptr, indices, k, remaining)
            remaining -= used
            if status == kernels.STATUS_BUDGET:
                raise Undecided(f"chromatic number undecided at k={k}", budget - remaining)
            if status == kernels.STATUS_YES:
                break
            k += 1
        chi = max(chi, k)
    return chi


def local_chromatic_number(g: Graph, r: int, budget: int = DEFAULT_BUDGET) -> int:
    """Maximum chromatic number over all r-balls of ``g``."""
    if r < 0:
        raise InputError(f"radius must be nonnegative, got {r}")
    best = 0
    for v in range(g.n):
        sub = ball(g, v, r).subgraph
        if sub.max_degree() + 1 <= best:
            continue
        try:
            best = max(best, chromatic_number(sub, budget))
        except Undecided as exc:
            raise Undecided(f"ball around centre {v}: {exc}", exc.nodes) from exc
    return best


def product_coloring(col_t: Coloring, col_r: Coloring) -> Coloring:
    """Combine colourings of two edge sets on one vertex set into one colouring.

    ``colour(v) = col_t(v) * |palette_r| + col_r(v)`` is proper on the union
    of the two edge sets whenever each input is proper on its own.
    """
    if len(col_t.colors) != len(col_r.colors):
        raise InputError(
            f"colourings cover different vertex sets ({len(col_t.colors)} vs {len(col_r.colors)})"
        )
    pr = col_r.palette_size
    colors = tuple(a * pr + b for a, b in zip(col_t.colors, col_r.colors))
    return Coloring(colors, col_t.palette_size * pr)


# -- degeneracy --------------------------------------------------------------


def degeneracy(g: Graph) -> DegeneracyCertificate:
    """Minimum-degree peeling with a bucket queue."""
    indptr, indices = g.csr
    order, k = kernels.core_order(indptr, indices)
    return DegeneracyCertificate(int(k), tuple(int(v) for v in order))


def is_k_degenerate(g: Graph, k: int) -> bool:
    return degeneracy(g).degeneracy <= k


# -- bipartiteness -----------------------------------------------------------


def _bfs_parity(g: Graph):
    """BFS every component; stop at the first edge joining equal depth parity."""
    depth = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if depth[s] >= 0:
            continue
        depth[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif (depth[y] - depth[x]) % 2 == 0:
                    return depth, parent, (x, y)
    return depth, parent, None


def find_odd_cycle(g: Graph) -> list[int] | None:
    """An odd simple cycle as a vertex sequence, or None iff ``g`` is bipartite."""
    depth, parent, clash = _bfs_parity(g)
    if clash is None:
        return None
    a, b = clash
    left, right = [a], [b]
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a = parent[a]
        b = parent[b]
        left.append(a)
        right.append(b)
    # left ends at the common ancestor; right does too, drop the duplicate
    return left + right[-2::-1]


def two_coloring(g: Graph) -> Coloring | None:
    depth, _, clash = _bfs_parity(g)
    if clash is not None:
        return None
    return Coloring(tuple(d % 2 for d in depth), 2 if g.n else 0)


# -- independence ------------------------------------------------------------


def _clique_cover_size(P: int, nbr: list[int]) -> int:
    """Greedy clique cover of the vertex mask ``P``; bounds alpha(P) from above."""
    count = 0
    while P:
        low = P & -P
        v = low.bit_length() - 1
        cand = P & nbr[v]
        P &= ~low
        while cand:
            lb = cand & -cand
            u = lb.bit_length() - 1
            P &= ~lb
            cand &= nbr[u]
        count += 1
    return count


def _exact_alpha(g: Graph, budget: int) -> int:
    nbr = [0] * g.n
    for v in range(g.n):
        for u in g.adj[v]:
            nbr[v] |= 1 << u
    best = 0
    nodes = 0

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def rec(P: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise Undecided(f"independence number undecided after {nodes} nodes", nodes)
        while P:
            # degree <= 1 vertices are always safe to take
            low_v, low_d, hi_v, hi_d = -1, g.n + 1, -1, -1
            Q = P
            while Q:
                lb = Q & -Q
                v = lb.bit_length() - 1
                Q ^= lb
                d = popcount(nbr[v] & P)
                if d < low_d:
                    low_v, low_d = v, d
                if d > hi_d:
                    hi_v, hi_d = v, d
            if low_d <= 1:
                P &= ~(nbr[low_v] | (1 << low_v))
                size += 1
                continue
            break
        if not P:
            best = max(best, size)
            return
        if size + _clique_cover_size(P, nbr) <= best:
            return
        bit = 1 << hi_v
        rec(P & ~(nbr[hi_v] | bit), size + 1)
        rec(P & ~bit, size)

    rec((1 << g.n) - 1, 0)
    return best


def greedy_independent_set(g: Graph) -> list[int]:
    """Repeatedly take a minimum-degree vertex and drop its neighbourhood."""
    alive = set(range(g.n))
    deg = {v: len(g.adj[v]) for v in alive}
    chosen = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        chosen.append(v)
        gone = {v} | (set(g.adj[v]) & alive)
        alive -= gone
        for x in gone:
            for y in g.adj[x]:
                if y in alive:
                    deg[y] -= 1
    return sorted(chosen)


def independence_number(g: Graph, mode: str = "exact", budget: int = DEFAULT_BUDGET) -> int:
    """alpha(g) in ``exact`` mode; a greedy lower bound in ``greedy`` mode."""
    if mode == "greedy":
        return len(greedy_independent_set(g))
    if mode != "exact":
        raise InputError(f"unknown mode {mode!r}")
    total = 0
    for sub, _ in _component_graphs(g):
        total += _exact_alpha(sub, budget)
    return total


def alpha_upper_bound(g: Graph) -> int:
    """Certified upper bound on alpha: size of a greedy clique cover."""
    nbr = [0] * g.n
    for v in range(g.n):
        for u in g.adj[v]:
            nbr[v] |= 1 << u
    order = sorted(range(g.n), key=lambda v: (len(g.adj[v]), v))
    covered = 0
    count = 0
    for v in order:
        if covered >> v & 1:
            continue
        clique = 1 << v
        cand = nbr[v] & ~covered
        while cand:
            lb = cand & -cand
            u = lb.bit_length() - 1
            clique |= lb
            cand &= nbr[u] & ~lb
        covered |= clique
        count += 1
    return count


def chi_lower_bound_via_alpha(g: Graph, alpha_upper: int) -> int:
    """ceil(n / alpha_upper), a lower bound on chi whenever alpha <= alpha_upper."""
    if alpha_upper < 1:
        raise InputError(f"alpha_upper must be at least 1, got {alpha_upper}")
    return math.ceil(g.n / alpha_upper)
