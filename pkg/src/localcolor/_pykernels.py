"""Pure-Python implementations of the hot graph kernels.

These mirror ``_kernels.pyx`` line for line so both backends return identical
results (including search-node counts). Graphs arrive in CSR form:
``indptr`` of length n+1 and ``indices`` holding each row's neighbours in
ascending order.
"""

from __future__ import annotations

STATUS_NO = 0
STATUS_YES = 1
STATUS_BUDGET = -1


def bfs_ball(indptr, indices, source, radius):
    """Level-synchronous BFS from ``source`` truncated at ``radius``.

    Returns ``(order, dist, parent)`` aligned with ``order``: vertices sorted
    by level then id; ``parent`` is the lowest-id neighbour one level down
    (-1 for the source).
    """
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    n = len(indptr) - 1
    dist = [-1] * n
    dist[source] = 0
    order = [source]
    frontier = [source]
    level = 0
    while frontier and level < radius:
        nxt = []
        for x in frontier:
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if dist[y] < 0:
                    dist[y] = level + 1
                    nxt.append(y)
        nxt.sort()
        order.extend(nxt)
        frontier = nxt
        level += 1
    out_dist = [dist[x] for x in order]
    parent = [-1] * len(order)
    for pos in range(1, len(order)):
        y = order[pos]
        want = out_dist[pos] - 1
        for j in range(indptr[y], indptr[y + 1]):
            if dist[indices[j]] == want:
                parent[pos] = indices[j]
                break
    return order, out_dist, parent


def core_order(indptr, indices):
    """Batagelj-Zaversnik bucket peeling. Returns ``(order, degeneracy)``."""
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    n = len(indptr) - 1
    if n == 0:
        return [], 0
    deg = [indptr[v + 1] - indptr[v] for v in range(n)]
    md = max(deg)
    bins = [0] * (md + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    degeneracy = 0
    for i in range(n):
        v = vert[i]
        if deg[v] > degeneracy:
            degeneracy = deg[v]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] -= 1
    return vert, degeneracy


def _select(n, color, sat, udeg):
    best = -1
    bs = -1
    bd = -1
    for v in range(n):
        if color[v] < 0 and (sat[v] > bs or (sat[v] == bs and udeg[v] > bd)):
            best = v
            bs = sat[v]
            bd = udeg[v]
    return best


def dsatur_search(indptr, indices, k, budget):
    """Exact k-colouring by saturation-ordered backtracking.

    Returns ``(status, colors, nodes)`` with status 1 (coloured), 0 (no
    k-colouring exists) or -1 (node budget exhausted).
    """
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    n = len(indptr) - 1
    color = [-1] * n
    if n == 0:
        return STATUS_YES, color, 0
    if k <= 0:
        return STATUS_NO, color, 0
    satc = [0] * (n * k)
    sat = [0] * n
    udeg = [indptr[v + 1] - indptr[v] for v in range(n)]

    def assign(v, c):
        color[v] = c
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if satc[u * k + c] == 0:
                sat[u] += 1
            satc[u * k + c] += 1
            udeg[u] -= 1

    def unassign(v):
        c = color[v]
        color[v] = -1
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            satc[u * k + c] -= 1
            if satc[u * k + c] == 0:
                sat[u] -= 1
            udeg[u] += 1

    # frames: [vertex, next colour to try, colours used before this vertex]
    stack = []
    colored = 0
    used = 0
    nodes = 0
    while True:
        if colored == n:
            return STATUS_YES, color, nodes
        nodes += 1
        if nodes > budget:
            return STATUS_BUDGET, color, nodes
        stack.append([_select(n, color, sat, udeg), 0, used])
        while stack:
            frame = stack[-1]
            v, c, used0 = frame
            if color[v] >= 0:
                unassign(v)
                colored -= 1
            limit = min(used0 + 1, k)
            while c < limit and satc[v * k + c] != 0:
                c += 1
            if c < limit:
                assign(v, c)
                colored += 1
                frame[1] = c + 1
                used = max(used0, c + 1)
                break
            stack.pop()
        else:
            return STATUS_NO, color, nodes


def dsatur_greedy(indptr, indices):
    """Brelaz heuristic colouring (no backtracking). Returns colours."""
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    n = len(indptr) - 1
    color = [-1] * n
    sat = [0] * n
    udeg = [indptr[v + 1] - indptr[v] for v in range(n)]
    seen = [set() for _ in range(n)]
    for _ in range(n):
        v = _select(n, color, sat, udeg)
        c = 0
        while c in seen[v]:
            c += 1
        color[v] = c
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if c not in seen[u]:
                seen[u].add(c)
                sat[u] += 1
            udeg[u] -= 1
    return color
