"""Tree reconstruction from complete traces.

Cost of a pair is the median of ``|t_i(u) - t_i(v)|`` over traces. A pair
is ruled out when some node ``p`` precedes ``u`` in a trace where ``u``
precedes ``v`` and precedes ``v`` in a trace where ``v`` precedes ``u``; on
a tree that pattern is impossible for an edge. The answer is the minimum
spanning tree of the surviving costs.
"""
from __future__ import annotations

import time

import numpy as np

from . import kernels
from .cascade import TraceSet
from .errors import InconsistencyError, ParameterError, ValidationError
from .evaluate import InferenceResult


def _check(ts: TraceSet) -> None:
    if ts.params.p != 1:
        raise ParameterError("tree reconstruction needs traces generated with p = 1")
    if len(ts) == 0 and ts.n > 1:
        raise ParameterError("tree reconstruction needs at least one trace")
    if not ts.is_complete():
        raise ValidationError("tree reconstruction needs complete traces")


def median_costs(ts: TraceSet) -> np.ndarray:
    """Lower-median gap matrix, before any witness pruning."""
    _check(ts)
    if ts.n < 2:
        return np.zeros((ts.n, ts.n))
    return kernels.tree_costs(np.ascontiguousarray(ts.time_matrix()))


def witness(ts: TraceSet, u: int, v: int) -> bool:
    """True if the ordering pattern above rules out the pair ``{u, v}``."""
    return kernels.has_witness(ts.order_matrix(), ts.rank_matrix(), u, v)


def tree_costs(ts: TraceSet) -> np.ndarray:
    """Full cost matrix with ``inf`` on every witnessed pair (eager, O(n^3 l))."""
    cost = median_costs(ts).copy()
    order, ranks = ts.order_matrix(), ts.rank_matrix()
    for u in range(ts.n):
        for v in range(u + 1, ts.n):
            if kernels.has_witness(order, ranks, u, v):
                cost[u, v] = cost[v, u] = np.inf
    return cost


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _sorted_pairs(cost: np.ndarray):
    iu, iv = np.triu_indices(len(cost), k=1)
    c = cost[iu, iv]
    keep = np.isfinite(c)
    iu, iv, c = iu[keep], iv[keep], c[keep]
    idx = np.lexsort((iv, iu, c))
    return iu[idx].tolist(), iv[idx].tolist()


def reconstruct_tree(ts: TraceSet, *, lazy: bool = True) -> InferenceResult:
    """Kruskal over median costs.

    With ``lazy`` the witness test runs only when Kruskal is about to add a
    pair; otherwise every pair is tested first. Both give the same tree.
    """
    t0 = time.perf_counter()
    n = ts.n
    if lazy:
        cost = median_costs(ts)
    else:
        cost = tree_costs(ts)
    us, vs = _sorted_pairs(cost)
    dsu = _DSU(n)
    edges: list[tuple[int, int]] = []
    tests = pruned = 0
    if lazy and n > 2:
        order, ranks = ts.order_matrix(), ts.rank_matrix()
    for u, v in zip(us, vs):
        if len(edges) == n - 1:
            break
        if dsu.find(u) == dsu.find(v):
            continue
        if lazy and n > 2:
            tests += 1
            if kernels.has_witness(order, ranks, u, v):
                pruned += 1
                continue
        dsu.union(u, v)
        edges.append((u, v))
    if len(edges) != max(n - 1, 0):
        raise InconsistencyError(
            f"finite costs leave the graph disconnected ({len(edges)} of {n - 1} edges)")
    return InferenceResult(
        n, edges, "tree",
        confidence={e: 1.0 for e in edges},
        params={"lazy": lazy},
        stats={"traces": len(ts), "witness_tests": tests, "pruned": pruned},
        wall_time=time.perf_counter() - t0,
    )
