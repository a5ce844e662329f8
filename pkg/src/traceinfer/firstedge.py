"""First-Edge and the temperature-controlled First-Edge+ heuristic."""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .cascade import TraceSet
from .degree import estimate_all
from .errors import ParameterError
from .evaluate import InferenceResult


def first_edge(ts: TraceSet) -> InferenceResult:
    """Edge between the first two nodes of every trace; the rest is ignored."""
    t0 = time.perf_counter()
    lens = ts.lengths()
    ok = lens >= 2
    start = ts.offsets[:-1][ok]
    a, b = ts.nodes[start], ts.nodes[start + 1]
    pairs = np.unique(np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1), axis=0)
    edges = [tuple(e) for e in pairs.tolist()]
    return InferenceResult(
        ts.n, edges, "first-edge",
        confidence={e: 1.0 for e in edges},
        stats={"traces": len(ts), "skipped": int((~ok).sum())},
        wall_time=time.perf_counter() - t0,
    )


@dataclass
class FirstEdgePlusConfig:
    degree_estimates: np.ndarray
    threshold: float = 0.5

    def __post_init__(self):
        self.degree_estimates = np.asarray(self.degree_estimates, dtype=float)
        if not 0 < self.threshold < 1:
            raise ParameterError(f"threshold must lie in (0, 1), got {self.threshold}")
        if np.any(self.degree_estimates < 0):
            raise ParameterError("degree estimates must be non-negative")

    @property
    def edge_budget(self) -> float:
        return float(np.nansum(self.degree_estimates)) / 2

    @classmethod
    def from_traces(cls, ts: TraceSet, threshold: float = 0.5) -> "FirstEdgePlusConfig":
        """Estimate degrees from ``ts``; nodes without an estimate get the median."""
        d = estimate_all(ts)
        known = ~np.isnan(d)
        fill = float(np.median(d[known])) if known.any() else 0.0
        d[~known] = fill
        return cls(d, threshold)


def first_edge_plus(ts: TraceSet, cfg: FirstEdgePlusConfig, seed: int) -> InferenceResult:
    """Scan trace prefixes and keep edges whose estimated probability clears the threshold.

    For a prefix ``u_1..u_k`` the next node attaches to ``u_i`` with
    probability ``d_i / sum_j d_j``. Each new edge raises the temperature
    ``M / E_hat``; with that probability the lowest-probability edge so far
    (oldest first on ties) is evicted. Scanning stops once the temperature
    reaches 1.
    """
    t0 = time.perf_counter()
    d_all = cfg.degree_estimates
    if len(d_all) < ts.n:
        raise ParameterError("degree estimates do not cover all nodes")
    budget = cfg.edge_budget
    if not budget > 0:
        raise ParameterError(f"estimated edge count must be positive, got {budget}")
    thr = cfg.threshold
    d_max = float(np.nanmax(d_all)) if len(d_all) else 0.0
    gen = _rng.generator(seed, "firstedge_plus")

    inferred: dict[tuple[int, int], tuple[float, int]] = {}
    heap: list[tuple[float, int, tuple[int, int]]] = []
    seq = 0
    inserted = evicted = processed = 0
    stopped = False
    nodes_all, off = ts.nodes, ts.offsets

    for i in range(len(ts)):
        nodes = nodes_all[off[i]:off[i + 1]]
        if len(nodes) < 2:
            processed += 1
            continue
        d = d_all[nodes]
        csum = np.cumsum(d)
        # beyond this prefix length no node can reach the threshold
        limit = int(np.searchsorted(csum, d_max / thr, side="right")) + 1
        limit = min(limit, len(nodes) - 1)
        for k in range(1, limit + 1):
            s = csum[k - 1]
            if s > 0:
                probs = d[:k] / s
            else:
                probs = np.full(k, 1.0 / k)
            w = int(nodes[k])
            for j in np.flatnonzero(probs >= thr):
                if len(inferred) >= budget:
                    stopped = True
                    break
                u = int(nodes[j])
                e = (u, w) if u < w else (w, u)
                p = float(probs[j])
                if e in inferred:
                    old_p, old_seq = inferred[e]
                    if p > old_p:
                        inferred[e] = (p, old_seq)
                        heapq.heappush(heap, (p, old_seq, e))
                    continue
                temp = len(inferred) / budget
                if inferred and gen.random() < temp:
                    while True:
                        hp, hs, he = heapq.heappop(heap)
                        if inferred.get(he) == (hp, hs):
                            del inferred[he]
                            evicted += 1
                            break
                inferred[e] = (p, seq)
                heapq.heappush(heap, (p, seq, e))
                seq += 1
                inserted += 1
            if stopped:
                break
        if stopped:
            break
        processed += 1

    edges = sorted(inferred)
    return InferenceResult(
        ts.n, edges, "first-edge+",
        confidence={e: inferred[e][0] for e in edges},
        params={"threshold": thr, "edge_budget": budget, "seed": seed},
        stats={"traces_processed": processed, "inserted": inserted, "evicted": evicted,
               "stopped_by_temperature": stopped},
        wall_time=time.perf_counter() - t0,
    )
