"""Pure-Python/numpy implementations of the hot kernels.

Reference semantics for ``_ckernels``; both must return identical arrays
for identical inputs (checked in the test suite).
"""
from __future__ import annotations

import heapq
import math

import numpy as np

NAME = "python"


def shortest_path_traces(indptr, adj_nodes, adj_edges, sources, lengths):
    """Single-source shortest paths for a batch of traces.

    ``lengths[i, e]`` is the length of edge ``e`` in trace ``i`` (``inf`` for
    a deleted edge). Returns ``(order, times, counts)``: discovered nodes in
    settle order (padded with -1), their distances (padded with ``inf``) and
    the number of discovered nodes per trace. Equal distances settle in node
    order; an output time equal to its predecessor is bumped to the next
    float so emitted times are strictly increasing.
    """
    n = len(indptr) - 1
    L = len(sources)
    order = np.full((L, n), -1, dtype=np.int64)
    times = np.full((L, n), np.inf)
    counts = np.zeros(L, dtype=np.int64)
    indptr = indptr.tolist()
    adj_nodes = adj_nodes.tolist()
    adj_edges = adj_edges.tolist()
    for i in range(L):
        w = lengths[i].tolist()
        dist = [math.inf] * n
        done = [False] * n
        s = int(sources[i])
        dist[s] = 0.0
        heap = [(0.0, s)]
        k = 0
        prev = -math.inf
        row_o = order[i]
        row_t = times[i]
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            t = d if d > prev else math.nextafter(prev, math.inf)
            row_o[k] = x
            row_t[k] = t
            prev = t
            k += 1
            for j in range(indptr[x], indptr[x + 1]):
                y = adj_nodes[j]
                if done[y]:
                    continue
                nd = d + w[adj_edges[j]]
                if nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        counts[i] = k
    return order, times, counts


def tree_costs(times):
    """Lower median over traces of ``|t_i(u) - t_i(v)|`` for every pair.

    ``times`` is ``(L, n)`` with every entry finite. Returns an ``(n, n)``
    symmetric matrix with a zero diagonal.
    """
    L, n = times.shape
    k = (L + 1) // 2 - 1
    cost = np.zeros((n, n))
    for u in range(n - 1):
        diff = np.abs(times[:, u + 1:] - times[:, u:u + 1])
        med = np.partition(diff, k, axis=0)[k]
        cost[u, u + 1:] = med
        cost[u + 1:, u] = med
    return cost


def has_witness(order, ranks, u, v):
    """True iff some node precedes ``u`` in a trace where ``u`` precedes ``v``
    and precedes ``v`` in a trace where ``v`` precedes ``u``."""
    ru = ranks[:, u]
    rv = ranks[:, v]
    uv = ru < rv
    if not uv.any() or uv.all():
        return False
    n = order.shape[1]
    seen = np.zeros(n, dtype=bool)
    pos = np.arange(n)
    a_rows = order[uv]
    a_mask = pos[None, :] < ru[uv][:, None]
    seen[a_rows[a_mask]] = True
    b_rows = order[~uv]
    b_mask = pos[None, :] < rv[~uv][:, None]
    return bool(seen[b_rows[b_mask]].any())


def set_count_hist(before, sets):
    """Histogram of ``|S cap before_i|`` over traces for each candidate set.

    ``before`` is ``(L, N)`` uint8, ``sets`` is ``(K, k)`` column indices.
    Returns ``(K, k + 1)`` int64 counts.
    """
    L = before.shape[0]
    K, k = sets.shape
    hist = np.zeros((K, k + 1), dtype=np.int64)
    if k == 0:
        hist[:, 0] = L
        return hist
    chunk = max(1, 2_000_000 // max(1, L * k))
    b = before.astype(np.int16)
    for lo in range(0, K, chunk):
        hi = min(K, lo + chunk)
        c = b[:, sets[lo:hi]].sum(axis=2)
        for j in range(k + 1):
            hist[lo:hi, j] = (c == j).sum(axis=0)
    return hist
