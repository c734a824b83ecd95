# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels. Behaviour matches ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int64_t i64

DEF STATUS_NO = 0
DEF STATUS_YES = 1
DEF STATUS_BUDGET = -1


def bfs_ball(const i64[::1] indptr, const i64[::1] indices, i64 source, i64 radius):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef i64[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 1, lvl_start, lvl_end, q, j, pos
    cdef i64 x, y, level = 0, want
    dist[source] = 0
    order[0] = source
    lvl_start = 0
    lvl_end = 1
    while lvl_end > lvl_start and level < radius:
        for q in range(lvl_start, lvl_end):
            x = order[q]
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if dist[y] < 0:
                    dist[y] = level + 1
                    order[tail] = y
                    tail += 1
        lvl_start = lvl_end
        lvl_end = tail
        level += 1
    out = np.asarray(order[:tail]).copy()
    # each level is sorted by id
    cdef Py_ssize_t a = 0, b
    while a < tail:
        b = a
        while b < tail and dist[out[b]] == dist[out[a]]:
            b += 1
        out[a:b].sort()
        a = b
    cdef i64[::1] ov = out
    cdef i64[::1] odist = np.empty(tail, dtype=np.int64)
    cdef i64[::1] parent = np.full(tail, -1, dtype=np.int64)
    for pos in range(tail):
        odist[pos] = dist[ov[pos]]
    for pos in range(1, tail):
        y = ov[pos]
        want = odist[pos] - 1
        for j in range(indptr[y], indptr[y + 1]):
            if dist[indices[j]] == want:
                parent[pos] = indices[j]
                break
    return out.tolist(), np.asarray(odist).tolist(), np.asarray(parent).tolist()


def core_order(const i64[::1] indptr, const i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return [], 0
    cdef i64[::1] deg = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t v, u, w, i, j, d
    cdef i64 md = 0, start = 0, num, du, pu, pw, degeneracy = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    cdef i64[::1] bins = np.zeros(md + 1, dtype=np.int64)
    cdef i64[::1] pos = np.empty(n, dtype=np.int64)
    cdef i64[::1] vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        bins[deg[v]] += 1
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
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
    return np.asarray(vert).tolist(), int(degeneracy)


cdef inline Py_ssize_t _select(Py_ssize_t n, i64* color, i64* sat, i64* udeg) nogil:
    cdef Py_ssize_t v, best = -1
    cdef i64 bs = -1, bd = -1
    for v in range(n):
        if color[v] < 0 and (sat[v] > bs or (sat[v] == bs and udeg[v] > bd)):
            best = v
            bs = sat[v]
            bd = udeg[v]
    return best


cdef inline void _assign(const i64[::1] indptr, const i64[::1] indices, i64 k,
                         i64* color, i64* satc, i64* sat, i64* udeg,
                         Py_ssize_t v, i64 c) nogil:
    cdef Py_ssize_t j, u
    color[v] = c
    for j in range(indptr[v], indptr[v + 1]):
        u = indices[j]
        if satc[u * k + c] == 0:
            sat[u] += 1
        satc[u * k + c] += 1
        udeg[u] -= 1


cdef inline void _unassign(const i64[::1] indptr, const i64[::1] indices, i64 k,
                           i64* color, i64* satc, i64* sat, i64* udeg,
                           Py_ssize_t v) nogil:
    cdef Py_ssize_t j, u
    cdef i64 c = color[v]
    color[v] = -1
    for j in range(indptr[v], indptr[v + 1]):
        u = indices[j]
        satc[u * k + c] -= 1
        if satc[u * k + c] == 0:
            sat[u] -= 1
        udeg[u] += 1


def dsatur_search(const i64[::1] indptr, const i64[::1] indices, i64 k, i64 budget):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return STATUS_YES, [], 0
    if k <= 0:
        return STATUS_NO, [-1] * n, 0
    cdef i64[::1] color_a = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] satc_a = np.zeros(n * k, dtype=np.int64)
    cdef i64[::1] sat_a = np.zeros(n, dtype=np.int64)
    cdef i64[::1] udeg_a = np.empty(n, dtype=np.int64)
    # frames: vertex, next colour, colours used before the vertex
    cdef i64[::1] fv = np.empty(n, dtype=np.int64)
    cdef i64[::1] fc = np.empty(n, dtype=np.int64)
    cdef i64[::1] fu = np.empty(n, dtype=np.int64)
    cdef i64* color = &color_a[0]
    cdef i64* satc = &satc_a[0]
    cdef i64* sat = &sat_a[0]
    cdef i64* udeg = &udeg_a[0]
    cdef Py_ssize_t v, top = 0
    cdef i64 c, used = 0, used0, limit, colored = 0, nodes = 0, status
    cdef bint advanced
    for v in range(n):
        udeg[v] = indptr[v + 1] - indptr[v]
    with nogil:
        while True:
            if colored == n:
                status = STATUS_YES
                break
            nodes += 1
            if nodes > budget:
                status = STATUS_BUDGET
                break
            fv[top] = _select(n, color, sat, udeg)
            fc[top] = 0
            fu[top] = used
            top += 1
            advanced = False
            while top > 0:
                v = fv[top - 1]
                c = fc[top - 1]
                used0 = fu[top - 1]
                if color[v] >= 0:
                    _unassign(indptr, indices, k, color, satc, sat, udeg, v)
                    colored -= 1
                limit = used0 + 1
                if limit > k:
                    limit = k
                while c < limit and satc[v * k + c] != 0:
                    c += 1
                if c < limit:
                    _assign(indptr, indices, k, color, satc, sat, udeg, v, c)
                    colored += 1
                    fc[top - 1] = c + 1
                    used = used0 if used0 > c + 1 else c + 1
                    advanced = True
                    break
                top -= 1
            if not advanced:
                status = STATUS_NO
                break
    return int(status), np.asarray(color_a).tolist(), int(nodes)


def dsatur_greedy(const i64[::1] indptr, const i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return []
    cdef i64[::1] color_a = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] sat_a = np.zeros(n, dtype=np.int64)
    cdef i64[::1] udeg_a = np.empty(n, dtype=np.int64)
    # colours never exceed max degree, so n+1 slots per vertex suffice
    cdef cnp.uint8_t[:, ::1] seen = np.zeros((n, n + 1), dtype=np.uint8)
    cdef i64* color = &color_a[0]
    cdef i64* sat = &sat_a[0]
    cdef i64* udeg = &udeg_a[0]
    cdef Py_ssize_t v, u, j, step
    cdef i64 c
    for v in range(n):
        udeg[v] = indptr[v + 1] - indptr[v]
    for step in range(n):
        v = _select(n, color, sat, udeg)
        c = 0
        while seen[v, c]:
            c += 1
        color[v] = c
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if not seen[u, c]:
                seen[u, c] = 1
                sat[u] += 1
            udeg[u] -= 1
    return np.asarray(color_a).tolist()
