"""Pessimistic certifier that a revealed r-ball is 2-degenerate.

The checker drives a :class:`~localcolor.random_models.RevealSession` level by
level from the outside in. It keeps a working subgraph F of surviving
vertices, deletes vertices whose degree is known to be at most 2, and gives
up ("no") on any event that would make the remaining analysis hard: a level
growing too fast, a cycle through the current level, or too many
sub-horseshoes. A "yes" is always correct; a "no" may be a false alarm.

Sub-horseshoe counting convention
---------------------------------
Before linkage, the down-neighbours of level-i vertices are unknown, only
their number ``1 + t_u``. A *horseshoe structure* is an i-path ``w_1..w_k``
(k >= 1) in the surviving forest with ``t_{w_1} >= 1`` and ``t_{w_k} >= 1``.
``h_i`` sums, over every i-path that lies on some horseshoe structure, the
number of ordered down-slot pairs at its two ends: ``(1+t_a)(1+t_b)`` for a
path from a to b != a, and ``(1+t_w) * t_w`` for a single vertex w. This
over-counts, which only makes "no" more likely.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, SessionStateError
from .random_models import RevealSession

SCHEDULES = ("paper_fixed_r", "paper_large_r")
DEGREE_MODES = ("session", "paper")


@dataclass(frozen=True)
class CheckerParams:
    ell: int
    radius: int
    epsilon: float = 1 / 9
    threshold_schedule: str = "paper_fixed_r"
    # "session": d = n*p of the instance; "paper": d = 3 ell ln ell
    degree_mode: str = "session"

    def __post_init__(self):
        if self.ell < 2:
            raise InputError(f"ell must be at least 2, got {self.ell}")
        if self.epsilon <= 0:
            raise InputError(f"epsilon must be positive, got {self.epsilon}")
        if self.radius < 0:
            raise InputError(f"radius must be nonnegative, got {self.radius}")
        if self.threshold_schedule not in SCHEDULES:
            raise InputError(f"unknown threshold schedule {self.threshold_schedule!r}")
        if self.degree_mode not in DEGREE_MODES:
            raise InputError(f"unknown degree mode {self.degree_mode!r}")

    @property
    def paper_degree(self) -> float:
        return 3 * self.ell * math.log(self.ell)

    def degree(self, session: RevealSession) -> float:
        if self.degree_mode == "paper":
            return self.paper_degree
        return session.n * session.p


@dataclass
class LevelRecord:
    i: int
    n_i: int
    c_i: int
    h_i: int | None = None
    b_i: float | None = None
    deleted: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "n_i": self.n_i,
            "c_i": self.c_i,
            "h_i": self.h_i,
            "b_i": None if self.b_i is None else float(self.b_i),
            "deleted": len(self.deleted),
        }


@dataclass
class Verdict:
    answer: str
    reason: dict | None = None
    per_level: list[LevelRecord] = field(default_factory=list)

    @property
    def yes(self) -> bool:
        return self.answer == "yes"

    @property
    def reason_kind(self) -> str | None:
        return None if self.reason is None else self.reason["kind"]

    def to_json(self) -> dict:
        return {
            "answer": self.answer,
            "reason": self.reason,
            "per_level": [rec.to_json() for rec in self.per_level],
        }


class WorkingSubgraph:
    """Surviving vertices of the ball with the F-edges revealed among them."""

    def __init__(self, levels: list[list[int]]):
        self.level_of = {u: i for i, level in enumerate(levels) for u in level}
        self.levels = levels
        self.alive = set(self.level_of)
        self.nbrs: dict[int, set[int]] = {u: set() for u in self.level_of}
        # known number of down-edges for vertices whose linkage is pending
        self.down_degree: dict[int, int] = {}

    def add_edges(self, edges) -> None:
        for a, b in edges:
            if a in self.alive and b in self.alive:
                self.nbrs[a].add(b)
                self.nbrs[b].add(a)

    def delete(self, u: int) -> None:
        self.alive.discard(u)
        for w in self.nbrs.pop(u):
            self.nbrs[w].discard(u)
        self.down_degree.pop(u, None)

    def upper(self, i: int) -> list[int]:
        """Surviving vertices of levels >= i, ascending."""
        return sorted(u for u in self.alive if self.level_of[u] >= i)

    def upper_nbrs(self, u: int, i: int) -> list[int]:
        return [w for w in self.nbrs[u] if self.level_of[w] >= i]

    def degree(self, u: int, i: int) -> int:
        return len(self.upper_nbrs(u, i)) + self.down_degree.get(u, 0)

    def cycle_rank(self, i: int) -> int:
        """Independent cycles in F restricted to levels >= i (0 iff a forest)."""
        vs = self.upper(i)
        if not vs:
            return 0
        m = sum(len(self.upper_nbrs(u, i)) for u in vs) // 2
        return m - len(vs) + len(self._components(vs, i))

    def _components(self, vs, i):
        seen: set[int] = set()
        comps = []
        for s in vs:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.upper_nbrs(x, i):
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(comp)
        return comps


def find_i_cycle(F: WorkingSubgraph, i: int) -> list[int] | None:
    """A simple cycle in F restricted to levels >= i through some level-i vertex."""
    for w in sorted(u for u in F.alive if F.level_of[u] == i):
        starts = sorted(F.upper_nbrs(w, i))
        if len(starts) < 2:
            continue
        label = {w: -1}
        parent: dict[int, int] = {}
        queue = deque()
        for j, a in enumerate(starts):
            label[a] = j
            parent[a] = w
            queue.append(a)
        while queue:
            x = queue.popleft()
            for y in sorted(F.upper_nbrs(x, i)):
                if y == w or y == parent[x]:
                    continue
                if y not in label:
                    label[y] = label[x]
                    parent[y] = x
                    queue.append(y)
                elif label[y] != label[x]:
                    left = [x]
                    while left[-1] != w:
                        left.append(parent[left[-1]])
                    right = [y]
                    while right[-1] != w:
                        right.append(parent[right[-1]])
                    # w, ..., x, y, ..., (back to w)
                    return left[::-1] + right[:-1]
    return None


def peel_low_degree(F: WorkingSubgraph, i: int) -> list[int]:
    """Delete degree <= 2 vertices of levels >= i until none remain.

    Always deletes the smallest-id current candidate; returns deletion order.
    """
    heap = [u for u in F.upper(i) if F.degree(u, i) <= 2]
    heapq.heapify(heap)
    deleted = []
    while heap:
        u = heapq.heappop(heap)
        if u not in F.alive:
            continue
        nbrs = F.upper_nbrs(u, i)
        F.delete(u)
        deleted.append(u)
        for w in nbrs:
            if F.degree(w, i) == 2:
                heapq.heappush(heap, w)
    return deleted


def count_sub_horseshoes(F: WorkingSubgraph, i: int, t: dict[int, int]) -> int:
    """h_i under the slot-pair convention described in the module docstring."""
    vs = F.upper(i)
    if F.cycle_rank(i) != 0:
        raise SessionStateError(f"levels >= {i} of F contain a cycle; horseshoes are undefined")
    in_level = {u for u in vs if F.level_of[u] == i}
    good = {u for u in in_level if t.get(u, 0) >= 1}
    if not good:
        return 0
    total = 0
    for comp in F._components(vs, i):
        ends = sorted(u for u in comp if u in in_level)
        if not ends:
            continue
        # root the tree and count good vertices per subtree
        root = comp[0]
        par = {root: None}
        order = [root]
        for x in order:
            for y in F.upper_nbrs(x, i):
                if y not in par:
                    par[y] = x
                    order.append(y)
        below = {x: int(x in good) for x in comp}
        for x in reversed(order):
            if par[x] is not None:
                below[par[x]] += below[x]
        comp_good = below[root]

        def beyond(x, y):
            """Good vertices on y's side once the edge x-y is cut."""
            return below[y] if par.get(y) == x else comp_good - below[x]

        branch = {x: sum(1 for y in F.upper_nbrs(x, i) if beyond(x, y) > 0) for x in ends}

        def side_ok(a, toward):
            return a in good or branch[a] - (beyond(a, toward) > 0) > 0

        for idx, a in enumerate(ends):
            if a in good or branch[a] >= 2:
                total += (1 + t.get(a, 0)) * t.get(a, 0)
            # BFS from a gives next hops on every path out of a
            prev = {a: None}
            queue = deque([a])
            while queue:
                x = queue.popleft()
                for y in F.upper_nbrs(x, i):
                    if y not in prev:
                        prev[y] = x
                        queue.append(y)
            for b in ends[idx + 1:]:
                hop = b
                while prev[hop] != a:
                    hop = prev[hop]
                if side_ok(a, hop) and side_ok(b, prev[b]):
                    total += (1 + t.get(a, 0)) * (1 + t.get(b, 0))
    return total


def threshold_b(i: int, level_sizes, params: CheckerParams, d: float | None = None):
    """Sub-horseshoe threshold b_i; exact Fraction where the schedule allows."""
    r = params.radius
    if not 1 <= i <= r:
        raise InputError(f"level {i} outside 1..{r}")
    if i == 1:
        return Fraction(0)
    prev = level_sizes[i - 1]
    if params.threshold_schedule == "paper_fixed_r" or i == r:
        return Fraction(prev, params.ell)
    return prev / (params.paper_degree if d is None else d)


def check_two_degenerate(session: RevealSession, params: CheckerParams) -> Verdict:
    """Run the reveal-driven 2-degeneracy check on a fresh session."""
    if session.r != params.radius:
        raise InputError(f"session radius {session.r} != params radius {params.radius}")
    if session.cursor != ((session.r, "inner") if session.r >= 1 else None):
        raise SessionStateError("checker needs a fresh session")
    d = params.degree(session)
    sizes = session.level_sizes()
    for i in range(1, session.r + 1):
        if sizes[i] > (1 + params.epsilon) * d * sizes[i - 1]:
            return Verdict("no", {"kind": "level_growth", "level": i, "n_i": sizes[i], "n_prev": sizes[i - 1]})
    F = WorkingSubgraph(session.levels)
    records: list[LevelRecord] = []
    for i in range(session.r, 0, -1):
        F.add_edges(session.inner_step(i))
        rec = LevelRecord(i=i, n_i=sizes[i], c_i=F.cycle_rank(i))
        records.append(rec)
        witness = find_i_cycle(F, i)
        if witness is not None:
            return Verdict("no", {"kind": "i_cycle", "level": i, "witness": witness}, records)
        t = session.counting_step(i)
        for u, x in t.items():
            if u in F.alive:
                F.down_degree[u] = 1 + x
        rec.deleted = peel_low_degree(F, i)
        for u in F.upper(i):
            assert F.degree(u, i) >= 3, f"survivor {u} has degree <= 2 after peeling"
        rec.h_i = count_sub_horseshoes(F, i, t)
        rec.b_i = threshold_b(i, sizes, params, d)
        if rec.h_i > rec.b_i:
            return Verdict(
                "no",
                {"kind": "horseshoe_overflow", "level": i, "h_i": rec.h_i, "b_i": float(rec.b_i)},
                records,
            )
        links = session.linkage_step(i)
        for u, (parent, rest) in links.items():
            if u in F.alive:
                F.down_degree.pop(u, None)
                F.add_edges((u, w) for w in [parent, *rest])
    return Verdict("yes", None, records)
