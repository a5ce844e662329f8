# cython: language_level=3
"""Compiled hot kernels. Semantics mirror ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs, nextafter
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

NAME = "cython"


cdef inline bint _less(double ka, long long na, double kb, long long nb) noexcept nogil:
    return ka < kb or (ka == kb and na < nb)


cdef inline void _push(double* hk, long long* hn, Py_ssize_t* size,
                       double key, long long node) noexcept nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(key, node, hk[parent], hn[parent]):
            hk[i] = hk[parent]
            hn[i] = hn[parent]
            i = parent
        else:
            break
    hk[i] = key
    hn[i] = node


cdef inline void _pop(double* hk, long long* hn, Py_ssize_t* size,
                      double* key, long long* node) noexcept nogil:
    cdef Py_ssize_t n, i, c
    cdef double lk
    cdef long long ln
    key[0] = hk[0]
    node[0] = hn[0]
    size[0] -= 1
    n = size[0]
    if n == 0:
        return
    lk = hk[n]
    ln = hn[n]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and _less(hk[c + 1], hn[c + 1], hk[c], hn[c]):
            c += 1
        if _less(hk[c], hn[c], lk, ln):
            hk[i] = hk[c]
            hn[i] = hn[c]
            i = c
        else:
            break
    hk[i] = lk
    hn[i] = ln


def shortest_path_traces(const long long[::1] indptr, const long long[::1] adj_nodes,
                         const long long[::1] adj_edges, const long long[::1] sources,
                         const double[:, ::1] lengths):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t L = sources.shape[0]
    cdef Py_ssize_t cap = adj_nodes.shape[0] + 1
    order_arr = np.full((L, n), -1, dtype=np.int64)
    times_arr = np.full((L, n), np.inf)
    counts_arr = np.zeros(L, dtype=np.int64)
    cdef long long[:, ::1] order = order_arr
    cdef double[:, ::1] times = times_arr
    cdef long long[::1] counts = counts_arr
    cdef double* dist = <double*>malloc(max(n, 1) * sizeof(double))
    cdef char* done = <char*>malloc(max(n, 1))
    cdef double* hk = <double*>malloc(cap * sizeof(double))
    cdef long long* hn = <long long*>malloc(cap * sizeof(long long))
    cdef Py_ssize_t i, j, k, size
    cdef long long x, y, s
    cdef double d, nd, t, prev
    if dist == NULL or done == NULL or hk == NULL or hn == NULL:
        free(dist); free(done); free(hk); free(hn)
        raise MemoryError()
    try:
        with nogil:
            for i in range(L):
                for j in range(n):
                    dist[j] = INFINITY
                memset(done, 0, n)
                s = sources[i]
                dist[s] = 0.0
                size = 0
                _push(hk, hn, &size, 0.0, s)
                k = 0
                prev = -INFINITY
                while size > 0:
                    _pop(hk, hn, &size, &d, &x)
                    if done[x]:
                        continue
                    done[x] = 1
                    if d > prev:
                        t = d
                    else:
                        t = nextafter(prev, INFINITY)
                    order[i, k] = x
                    times[i, k] = t
                    prev = t
                    k += 1
                    for j in range(indptr[x], indptr[x + 1]):
                        y = adj_nodes[j]
                        if done[y]:
                            continue
                        nd = d + lengths[i, adj_edges[j]]
                        if nd < dist[y]:
                            dist[y] = nd
                            _push(hk, hn, &size, nd, y)
                counts[i] = k
    finally:
        free(dist); free(done); free(hk); free(hn)
    return order_arr, times_arr, counts_arr


cdef double _select(double* a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    # Hoare quickselect; returns the k-th smallest (0-based).
    cdef Py_ssize_t lo = 0, hi = n - 1, i, j
    cdef double pivot, tmp
    while lo < hi:
        pivot = a[(lo + hi) >> 1]
        i = lo
        j = hi
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                tmp = a[i]; a[i] = a[j]; a[j] = tmp
                i += 1
                j -= 1
        if k <= j:
            hi = j
        elif k >= i:
            lo = i
        else:
            return a[k]
    return a[k]


def tree_costs(const double[:, ::1] times):
    cdef Py_ssize_t L = times.shape[0]
    cdef Py_ssize_t n = times.shape[1]
    cdef Py_ssize_t k = (L + 1) // 2 - 1
    cost_arr = np.zeros((n, n))
    cdef double[:, ::1] cost = cost_arr
    tt_arr = np.ascontiguousarray(np.asarray(times).T)
    cdef const double[:, ::1] tt = tt_arr
    cdef double* buf = <double*>malloc(max(L, 1) * sizeof(double))
    cdef Py_ssize_t u, v, i
    cdef double med
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for u in range(n):
                for v in range(u + 1, n):
                    for i in range(L):
                        buf[i] = fabs(tt[u, i] - tt[v, i])
                    med = _select(buf, L, k)
                    cost[u, v] = med
                    cost[v, u] = med
    finally:
        free(buf)
    return cost_arr


def has_witness(const long long[:, ::1] order, const long long[:, ::1] ranks,
                long long u, long long v):
    cdef Py_ssize_t L = order.shape[0]
    cdef Py_ssize_t n = order.shape[1]
    cdef Py_ssize_t i, j
    cdef long long ru, rv
    cdef bint any_uv = False, any_vu = False, found = False
    seen_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] seen = seen_arr
    with nogil:
        for i in range(L):
            ru = ranks[i, u]
            rv = ranks[i, v]
            if ru < rv:
                any_uv = True
                for j in range(ru):
                    seen[order[i, j]] = 1
            else:
                any_vu = True
        if any_uv and any_vu:
            for i in range(L):
                ru = ranks[i, u]
                rv = ranks[i, v]
                if rv < ru:
                    for j in range(rv):
                        if seen[order[i, j]]:
                            found = True
                            break
                    if found:
                        break
    return bool(found)


def set_count_hist(const unsigned char[:, ::1] before, const long long[:, ::1] sets):
    cdef Py_ssize_t L = before.shape[0]
    cdef Py_ssize_t K = sets.shape[0]
    cdef Py_ssize_t k = sets.shape[1]
    hist_arr = np.zeros((K, k + 1), dtype=np.int64)
    cdef long long[:, ::1] hist = hist_arr
    bt_arr = np.ascontiguousarray(np.asarray(before).T)
    cdef const unsigned char[:, ::1] bt = bt_arr
    cdef Py_ssize_t s, i, j, c
    if k == 0:
        hist_arr[:, 0] = L
        return hist_arr
    cdef long long* tmp = <long long*>malloc(max(L, 1) * sizeof(long long))
    if tmp == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(K):
                for i in range(L):
                    tmp[i] = bt[sets[s, 0], i]
                for j in range(1, k):
                    for i in range(L):
                        tmp[i] += bt[sets[s, j], i]
                for i in range(L):
                    hist[s, tmp[i]] += 1
    finally:
        free(tmp)
    return hist_arr
