# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Tabu search kernel for the placement QAP.

Same contract and move order as ``permuc._tabu_py``; swap deltas are kept in
a matrix and updated incrementally after each move (O(m^2) per iteration
instead of O(m^3)).
"""

import time

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 full_delta(const i64[:, ::1] a, const i64[:, ::1] b, i64[::1] p,
                           Py_ssize_t m, Py_ssize_t r, Py_ssize_t s) nogil:
    cdef i64 d
    cdef Py_ssize_t k
    d = (a[r, r] - a[s, s]) * (b[p[s], p[s]] - b[p[r], p[r]]) + \
        (a[r, s] - a[s, r]) * (b[p[s], p[r]] - b[p[r], p[s]])
    for k in range(m):
        if k != r and k != s:
            d += (a[k, r] - a[k, s]) * (b[p[k], p[s]] - b[p[k], p[r]]) + \
                 (a[r, k] - a[s, k]) * (b[p[s], p[k]] - b[p[r], p[k]])
    return d


cdef inline i64 part_delta(const i64[:, ::1] a, const i64[:, ::1] b, i64[::1] p,
                           i64[:, ::1] delta, Py_ssize_t i, Py_ssize_t j,
                           Py_ssize_t r, Py_ssize_t s) nogil:
    # valid only for {i, j} disjoint from the last move {r, s}; p is post-move
    return delta[i, j] + \
        (a[r, i] - a[r, j] + a[s, j] - a[s, i]) * \
        (b[p[s], p[i]] - b[p[s], p[j]] + b[p[r], p[j]] - b[p[r], p[i]]) + \
        (a[i, r] - a[j, r] + a[j, s] - a[i, s]) * \
        (b[p[i], p[s]] - b[p[j], p[s]] + b[p[j], p[r]] - b[p[i], p[r]])


def qap_cost(flow, dist, perm):
    cdef const i64[:, ::1] a = np.ascontiguousarray(flow, dtype=np.int64)
    cdef const i64[:, ::1] b = np.ascontiguousarray(dist, dtype=np.int64)
    cdef const i64[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef Py_ssize_t m = p.shape[0], i, j
    cdef i64 c = 0
    for i in range(m):
        for j in range(m):
            c += a[i, j] * b[p[i], p[j]]
    return int(c)


def tabu_search(flow, dist, perm0, Py_ssize_t n_real, Py_ssize_t max_iters,
                i64 tenure, double deadline=0.0, bint check=False):
    cdef const i64[:, ::1] a = np.ascontiguousarray(flow, dtype=np.int64)
    cdef const i64[:, ::1] b = np.ascontiguousarray(dist, dtype=np.int64)
    perm_arr = np.array(perm0, dtype=np.int64)
    cdef i64[::1] p = perm_arr
    cdef Py_ssize_t m = p.shape[0]
    inv_arr = np.empty(m, dtype=np.int64)
    cdef i64[::1] inv = inv_arr
    cdef i64[:, ::1] delta = np.zeros((m, m), dtype=np.int64)
    cdef i64[:, ::1] tabu = np.zeros((m, m), dtype=np.int64)
    hist_arr = np.empty(max(max_iters, 0), dtype=np.int64)
    cdef i64[::1] hist = hist_arr
    cdef Py_ssize_t i, j, it, loc, r, s, best_r, best_loc, done = 0
    cdef i64 cost, best_cost, d, best_d, pr, ps
    cdef bint forbidden, found

    for i in range(m):
        inv[p[i]] = i
    cost = qap_cost(a, b, perm_arr)
    best_cost = cost
    best_perm = perm_arr.copy()
    for i in range(n_real):
        for j in range(i + 1, m):
            delta[i, j] = full_delta(a, b, p, m, i, j)

    for it in range(1, max_iters + 1):
        if deadline > 0.0 and time.perf_counter() > deadline:
            break
        found = False
        best_d = 0
        best_r = -1
        best_loc = -1
        with nogil:
            for r in range(n_real):
                for loc in range(m):
                    s = inv[loc]
                    if s <= r:
                        continue
                    d = delta[r, s]
                    forbidden = tabu[r, loc] > it and tabu[s, p[r]] > it
                    if forbidden and not (cost + d < best_cost):
                        continue
                    if not found or d < best_d:
                        found = True
                        best_d = d
                        best_r = r
                        best_loc = loc
        if not found:
            break
        r = best_r
        s = inv[best_loc]
        pr = p[r]
        ps = p[s]
        tabu[r, pr] = it + tenure
        tabu[s, ps] = it + tenure
        p[r] = ps
        p[s] = pr
        inv[ps] = r
        inv[pr] = s
        cost += best_d
        if check:
            assert cost == qap_cost(a, b, perm_arr), "incremental delta diverged"
        if cost < best_cost:
            best_cost = cost
            best_perm = perm_arr.copy()
        hist[done] = best_cost
        done += 1
        with nogil:
            for i in range(n_real):
                for j in range(i + 1, m):
                    if i != r and i != s and j != r and j != s:
                        delta[i, j] = part_delta(a, b, p, delta, i, j, r, s)
                    else:
                        delta[i, j] = full_delta(a, b, p, m, i, j)
    return best_perm, int(best_cost), hist_arr[:done].copy()
