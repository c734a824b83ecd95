"""Simple undirected graphs, r-balls and the edge-list text format."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InputError, ParseError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Adjacency is kept as sorted neighbour tuples; a CSR view for the kernels
    is built lazily.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g.adj = tuple(tuple(sorted(a)) for a in adj)
        return g

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter(
            (u for a in self.adj for u in a), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @cached_property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[Edge]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comp.sort()
            out.append(comp)
        return out


@dataclass(frozen=True)
class Ball:
    """The r-ball around ``center``.

    ``vertices`` lists original ids ordered by level then id; local id ``i``
    in ``subgraph``, ``tree_edges`` and ``remainder_edges`` refers to
    ``vertices[i]``. The centre is always local id 0.
    """

    center: int
    radius: int
    levels: tuple[tuple[int, ...], ...]
    vertices: tuple[int, ...]
    subgraph: Graph
    tree_edges: frozenset[Edge]
    remainder_edges: frozenset[Edge]
    depth: tuple[int, ...] = field(repr=False)

    @property
    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    def tree_graph(self) -> Graph:
        return Graph(len(self.vertices), self.tree_edges)

    def remainder_graph(self) -> Graph:
        return Graph(len(self.vertices), self.remainder_edges)

    def original_edges(self, edges: Iterable[Edge]) -> set[Edge]:
        vs = self.vertices
        return {_norm(vs[a], vs[b]) for a, b in edges}


def ball(g: Graph, v: int, r: int) -> Ball:
    """Induced subgraph on vertices within distance ``r`` of ``v``.

    Each non-root vertex's tree parent is its lowest-id neighbour on the
    previous level; every other ball edge goes to the remainder.
    """
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range for graph on {g.n} vertices")
    if r < 0:
        raise InputError(f"radius must be nonnegative, got {r}")
    indptr, indices = g.csr
    order, dist, parent = kernels.bfs_ball(indptr, indices, v, r)
    local = {x: i for i, x in enumerate(order)}
    levels: list[list[int]] = [[] for _ in range((dist[-1] if dist else 0) + 1)]
    for x, d in zip(order, dist):
        levels[d].append(x)
    while len(levels) < r + 1:
        levels.append([])
    sub_adj = [[local[y] for y in g.adj[x] if y in local] for x in order]
    sub = Graph.from_adjacency(sub_adj)
    tree = frozenset(_norm(local[parent[i]], i) for i in range(1, len(order)))
    rem = frozenset(e for e in sub.edges() if e not in tree)
    return Ball(
        center=v,
        radius=r,
        levels=tuple(tuple(level) for level in levels),
        vertices=tuple(order),
        subgraph=sub,
        tree_edges=tree,
        remainder_edges=rem,
        depth=tuple(dist),
    )


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced on ``s``; returns it with ``new -> old`` id list."""
    keep = sorted(set(s))
    for x in keep:
        if not 0 <= x < g.n:
            raise InputError(f"vertex {x} out of range for graph on {g.n} vertices")
    new_id = {x: i for i, x in enumerate(keep)}
    adj = [[new_id[y] for y in g.adj[x] if y in new_id] for x in keep]
    return Graph.from_adjacency(adj), keep


def delete_vertices(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Remove ``s``; returns the relabelled survivor graph and ``new -> old`` ids."""
    drop = set(s)
    for x in drop:
        if not 0 <= x < g.n:
            raise InputError(f"vertex {x} out of range for graph on {g.n} vertices")
    return induced_subgraph(g, (x for x in range(g.n) if x not in drop))


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: a vertex-count line, then ``u v`` lines.

    Blank lines and lines starting with ``#`` are skipped. Each edge must
    satisfy ``0 <= u < v < n`` and appear once.
    """
    n = None
    seen: set[Edge] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(lineno, f"non-integer token in {line!r}") from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise ParseError(lineno, f"expected a nonnegative vertex count, got {line!r}")
            n = nums[0]
            continue
        if len(nums) != 2:
            raise ParseError(lineno, f"expected 'u v', got {line!r}")
        u, v = nums
        if u == v:
            raise ParseError(lineno, f"self-loop at vertex {u}")
        if u > v:
            raise ParseError(lineno, f"edge must be written with u < v, got {line!r}")
        if u < 0 or v >= n:
            raise ParseError(lineno, f"endpoint out of range 0..{n - 1}: {line!r}")
        if (u, v) in seen:
            raise ParseError(lineno, f"duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise ParseError(0, "missing vertex count line")
    return Graph(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# Small named graphs used by tests, docs and the CLI.

def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)
