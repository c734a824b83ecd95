"""Seeded G(n,p) sampling and the level-by-level reveal of an r-ball.

A :class:`RevealSession` grows the ball around vertex 0 of a virtual G(n,p)
without materialising the rest of the graph. The creation phase places
vertices on levels; the connection phase then walks the levels from the
outside in, revealing inner edges, the number of extra down-edges of each
vertex, and finally the down-edges themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SessionStateError
from .graph import Ball, Graph

# Below this edge probability pair sampling skips ahead geometrically
# instead of flipping every pair.
SPARSE_P = 0.25

_CREATE, _INNER, _COUNT, _LINK = 0, 1, 2, 3
_STEP_NAMES = ("creation", "inner", "counting", "linkage")


@dataclass(frozen=True)
class RngStream:
    """Named child of a master seed; equal names give equal bit streams."""

    master_seed: int
    stream_id: int = 0

    def generator(self, *sub: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id, *sub))
        return np.random.default_rng(seq)

    def child(self, index: int) -> "RngStream":
        # fold the index into the id so children of distinct streams never collide
        return RngStream(self.master_seed, self.stream_id * 1_000_003 + index + 1)


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")


def sample_pairs(m: int, p: float, gen: np.random.Generator) -> np.ndarray:
    """Independent p-coin on every pair of ``0..m-1``; returns accepted pairs (k, 2).

    Sparse probabilities use geometric gaps over the lexicographic pair
    enumeration, which has the same distribution as flipping every pair.
    """
    total = m * (m - 1) // 2
    if total == 0 or p == 0.0:
        return np.empty((0, 2), dtype=np.int64)
    if p == 1.0:
        idx = np.arange(total, dtype=np.int64)
    elif p < SPARSE_P:
        chunks = []
        last = -1
        while True:
            want = int((total - last) * p + 6 * np.sqrt(total * p) + 16)
            gaps = gen.geometric(p, size=want)
            pos = last + np.cumsum(gaps)
            chunks.append(pos[pos < total])
            if pos[-1] >= total:
                break
            last = int(pos[-1])
        idx = np.concatenate(chunks)
    else:
        idx = np.flatnonzero(gen.random(total) < p)
    rows = np.arange(m, dtype=np.int64)
    starts = rows * (2 * m - rows - 1) // 2
    u = np.searchsorted(starts, idx, side="right") - 1
    v = idx - starts[u] + u + 1
    return np.stack([u, v], axis=1)


def sample_gnp(n: int, p: float, rng: RngStream) -> Graph:
    """Erdos-Renyi graph: each pair present independently with probability p."""
    if n < 0:
        raise InputError(f"vertex count must be nonnegative, got {n}")
    _check_p(p)
    pairs = sample_pairs(n, p, rng.generator())
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs.tolist():
        adj[u].append(v)
        adj[v].append(u)
    return Graph.from_adjacency(adj)


class RevealSession:
    """Incremental reveal of the r-ball around vertex 0 of G(n, p).

    Construct with :func:`begin_reveal`; then call ``inner_step``,
    ``counting_step`` and ``linkage_step`` for ``i = r, ..., 1`` in that
    order. Each (level, step) draws from its own derived stream.
    """

    def __init__(self, n: int, p: float, r: int, rng: RngStream):
        if n < 1:
            raise InputError(f"population must be positive, got {n}")
        if r < 0:
            raise InputError(f"radius must be nonnegative, got {r}")
        _check_p(p)
        self.n = n
        self.p = p
        self.r = r
        self.rng = rng
        self.levels: list[list[int]] = [[0]]
        self.level_of: dict[int, int] = {0: 0}
        self.used_flips: dict[int, int] = {}
        self.extra_yes: dict[int, int] = {}
        self.f_edges: set[tuple[int, int]] = set()
        self.t_edges: set[tuple[int, int]] = set()
        self.r_edges: set[tuple[int, int]] = set()
        self.down: dict[int, list[int]] = {}
        self.log: list[dict] = []
        self.cursor: tuple[int, str] | None = (r, "inner") if r >= 1 else None
        self._create()

    # creation phase
    def _create(self) -> None:
        placed = np.zeros(self.n, dtype=bool)
        placed[0] = True
        for i in range(self.r):
            m = len(self.levels[i])
            new: list[int] = []
            if m and self.p > 0:
                cand = np.flatnonzero(~placed)
                flips = self.rng.generator(i, _CREATE).geometric(self.p, size=cand.size)
                hit = flips <= m
                for u, k in zip(cand[hit].tolist(), flips[hit].tolist()):
                    new.append(u)
                    self.used_flips[u] = k
                    self.level_of[u] = i + 1
                placed[cand[hit]] = True
            self.levels.append(new)

    def _expect(self, i: int, step: str) -> None:
        if self.cursor != (i, step):
            raise SessionStateError(f"{step} step at level {i} called with cursor at {self.cursor}")

    def inner_step(self, i: int) -> list[tuple[int, int]]:
        """Flip a p-coin for every pair inside level i; return accepted edges."""
        self._expect(i, "inner")
        level = self.levels[i]
        pairs = sample_pairs(len(level), self.p, self.rng.generator(i, _INNER))
        edges = [(level[a], level[b]) for a, b in pairs.tolist()]
        self.f_edges.update(edges)
        self.log.append({"level": i, "step": "inner", "edges": [list(e) for e in edges]})
        self.cursor = (i, "counting")
        return edges

    def counting_step(self, i: int) -> dict[int, int]:
        """Draw t_u ~ Bin(|L_{i-1}| - k_u, p) extra down-edges for each u in level i."""
        self._expect(i, "counting")
        level = self.levels[i]
        prev = len(self.levels[i - 1])
        remaining = np.array([prev - self.used_flips[u] for u in level], dtype=np.int64)
        t = self.rng.generator(i, _COUNT).binomial(remaining, self.p) if level else []
        out = {u: int(x) for u, x in zip(level, np.asarray(t).tolist())}
        self.extra_yes.update(out)
        self.log.append({"level": i, "step": "counting", "extra_yes": {str(u): x for u, x in out.items()}})
        self.cursor = (i, "linkage")
        return out

    def linkage_step(self, i: int) -> dict[int, tuple[int, list[int]]]:
        """Pick each u's 1 + t_u distinct down-neighbours; one uniform pick is the tree edge.

        Returns ``u -> (tree parent, remainder down-neighbours)``.
        """
        self._expect(i, "linkage")
        level = self.levels[i]
        prev = self.levels[i - 1]
        out: dict[int, tuple[int, list[int]]] = {}
        if level:
            keys = self.rng.generator(i, _LINK).random((len(level), len(prev)))
            perm = np.argsort(keys, axis=1, kind="stable")
            for row, u in enumerate(level):
                size = 1 + self.extra_yes[u]
                assert size <= len(prev), "down-degree exceeds previous level"
                picks = [prev[j] for j in perm[row, :size].tolist()]
                parent, rest = picks[0], sorted(picks[1:])
                e = (parent, u) if parent < u else (u, parent)
                self.t_edges.add(e)
                self.f_edges.add(e)
                for w in rest:
                    e = (w, u) if w < u else (u, w)
                    self.r_edges.add(e)
                    self.f_edges.add(e)
                self.down[u] = [parent] + rest
                out[u] = (parent, rest)
        self.log.append(
            {"level": i, "step": "linkage", "down": {str(u): [pr, rs] for u, (pr, rs) in out.items()}}
        )
        self.cursor = (i - 1, "inner") if i > 1 else None
        return out

    @property
    def complete(self) -> bool:
        return self.cursor is None

    def finish(self) -> None:
        """Run every remaining step in order."""
        while self.cursor is not None:
            i, step = self.cursor
            getattr(self, f"{step}_step")(i)

    def level_sizes(self) -> list[int]:
        return [len(level) for level in self.levels]

    def check_invariants(self) -> None:
        for i in range(1, len(self.levels)):
            prev = len(self.levels[i - 1])
            for u in self.levels[i]:
                k = self.used_flips[u]
                assert 1 <= k <= prev, f"k_u={k} outside 1..{prev} for vertex {u}"
                if u in self.extra_yes:
                    t = self.extra_yes[u]
                    assert 0 <= t <= prev - k, f"t_u={t} outside 0..{prev - k} for vertex {u}"
                if u in self.down:
                    assert len(self.down[u]) == 1 + self.extra_yes[u]
                    assert len(set(self.down[u])) == len(self.down[u])
        assert not (self.t_edges & self.r_edges)
        assert self.t_edges | self.r_edges <= self.f_edges

    def transcript(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "r": self.r,
            "master_seed": self.rng.master_seed,
            "stream_id": self.rng.stream_id,
            "levels": [list(level) for level in self.levels],
            "used_flips": {str(u): k for u, k in sorted(self.used_flips.items())},
            "extra_yes": {str(u): t for u, t in sorted(self.extra_yes.items())},
            "steps": self.log,
        }


def begin_reveal(n: int, p: float, r: int, rng: RngStream) -> RevealSession:
    """Start a session; the creation phase runs immediately."""
    return RevealSession(n, p, r, rng)


def reveal_to_ball(session: RevealSession) -> Ball:
    """Materialise the revealed ball (centre relabelled to 0)."""
    if not session.complete:
        raise SessionStateError(f"session incomplete, cursor at {session.cursor}")
    order = [u for level in session.levels for u in level]
    local = {u: i for i, u in enumerate(order)}
    adj: list[list[int]] = [[] for _ in order]
    for a, b in session.f_edges:
        adj[local[a]].append(local[b])
        adj[local[b]].append(local[a])
    sub = Graph.from_adjacency(adj)

    def loc(e):
        a, b = local[e[0]], local[e[1]]
        return (a, b) if a < b else (b, a)

    tree = frozenset(loc(e) for e in session.t_edges)
    rem = frozenset(loc(e) for e in session.f_edges - session.t_edges)
    depth = tuple(session.level_of[u] for u in order)
    return Ball(
        center=0,
        radius=session.r,
        levels=tuple(tuple(level) for level in session.levels),
        vertices=tuple(order),
        subgraph=sub,
        tree_edges=tree,
        remainder_edges=rem,
        depth=depth,
    )
