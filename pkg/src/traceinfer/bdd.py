"""Bounded-degree reconstruction with a logarithmic scoring rule.

For a vertex ``u`` and candidate neighbour set ``S`` each trace scores

    log |S_i| - lambda * sum_{v in S_i} (t_i(u) - t_i(v))

where ``S_i`` is the part of ``S`` infected before ``u``. A trace where
``u`` is the source scores 0; any other trace with ``S_i`` empty scores
``-inf``. The neighbour estimate ``R(u)`` maximises the average score over
all sets of size at most ``delta_max``. Only traces that reach ``u`` are
scored, so ``ell`` below is per vertex.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cascade import TraceSet
from .errors import BudgetError, ParameterError, ValidationError
from .evaluate import InferenceResult

NEG_INF = -math.inf


@dataclass(frozen=True)
class ScoreConfig:
    lam: float = 1.0
    delta_max: int = 3
    delta_cap: int = 4
    max_sets: int = 2_000_000  # candidate sets per vertex
    partial: bool = False  # experimental: accept p < 1 traces

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError("lambda must be positive")
        if self.delta_max < 1:
            raise ParameterError("delta_max must be at least 1")
        if self.delta_max > self.delta_cap:
            raise ParameterError(
                f"delta_max={self.delta_max} exceeds the enumeration cap {self.delta_cap}")

    @classmethod
    def for_traces(cls, ts: TraceSet, delta_max: int, **kw) -> "ScoreConfig":
        return cls(lam=ts.params.lam, delta_max=delta_max, **kw)


@dataclass
class NeighborEstimate:
    node: int
    neighbors: tuple[int, ...]
    score: float
    gap: float  # best minus runner-up score


def _check(ts: TraceSet, cfg: ScoreConfig) -> None:
    # with p = 1 a trace covers the source's component; traces missing u say nothing about it
    if not cfg.partial and ts.params.p != 1:
        raise ValidationError("traces with p < 1 are partial (set partial=True for the experimental variant)")


def count_sets(n_candidates: int, delta: int) -> int:
    return sum(math.comb(n_candidates, k) for k in range(min(delta, n_candidates) + 1))


class _VertexData:
    """Per-vertex quantities shared by every candidate set."""

    def __init__(self, ts: TraceSet, u: int, cfg: ScoreConfig):
        tm = ts.time_matrix()
        tm = tm[np.isfinite(tm[:, u])]
        tu = tm[:, u:u + 1]
        self.others = np.array([v for v in range(ts.n) if v != u], dtype=np.int64)
        tv = tm[:, self.others]
        self.before = np.ascontiguousarray(tv < tu, dtype=np.uint8)
        gaps = np.where(tv < tu, tu - tv, 0.0)
        self.gap_sum = gaps.sum(axis=0)
        self.ell = len(tm)
        self.n_source = int(np.count_nonzero(tu[:, 0] == 0.0))
        self.before_count = self.before.sum(axis=0, dtype=np.int64)


def _score_rows(vd: _VertexData, sets: np.ndarray, lam: float) -> np.ndarray:
    K, k = sets.shape
    if vd.ell == 0:
        return np.zeros(K)
    hist = kernels.set_count_hist(vd.before, sets)
    acc = np.zeros(K)
    for c in range(1, k + 1):
        acc += hist[:, c] * math.log(c)
    g = np.zeros(K)
    for j in range(k):
        g += vd.gap_sum[sets[:, j]]
    out = (acc - lam * g) / vd.ell
    out[hist[:, 0] > vd.n_source] = NEG_INF
    return out


def score_set(ts: TraceSet, u: int, S, cfg: ScoreConfig) -> float:
    """Average score of the candidate set ``S`` for vertex ``u``."""
    S = sorted(int(v) for v in S)
    if u in S:
        raise ParameterError("u must not be in S")
    if len(S) != len(set(S)) or any(v < 0 or v >= ts.n for v in S):
        raise ParameterError("S must hold distinct node ids")
    if len(S) > cfg.delta_max:
        raise ParameterError(f"|S|={len(S)} exceeds delta_max={cfg.delta_max}")
    _check(ts, cfg)
    vd = _VertexData(ts, u, cfg)
    cols = np.searchsorted(vd.others, S).reshape(1, -1).astype(np.int64)
    return float(_score_rows(vd, cols, cfg.lam)[0])


def candidate_scores(ts: TraceSet, u: int, cfg: ScoreConfig):
    """All sets of size <= delta_max (size, then lexicographic) and their scores.

    Returns ``(sets, scores)`` where ``sets`` is a list of node tuples.
    """
    _check(ts, cfg)
    n_cand = ts.n - 1
    need = count_sets(n_cand, cfg.delta_max)
    if need > cfg.max_sets:
        raise BudgetError(f"vertex {u} needs {need} candidate sets, budget is {cfg.max_sets}")
    vd = _VertexData(ts, u, cfg)
    sets: list[tuple[int, ...]] = []
    parts = []
    for k in range(min(cfg.delta_max, n_cand) + 1):
        combos = np.array(list(itertools.combinations(range(n_cand), k)), dtype=np.int64)
        combos = combos.reshape(math.comb(n_cand, k), k)
        parts.append(_score_rows(vd, combos, cfg.lam))
        sets.extend(tuple(vd.others[c].tolist()) for c in combos)
    return sets, np.concatenate(parts), vd


def neighbor_argmax(ts: TraceSet, u: int, cfg: ScoreConfig) -> NeighborEstimate:
    sets, scores, _ = candidate_scores(ts, u, cfg)
    best = int(np.argmax(scores))  # first maximum: smallest size, then lexicographic
    top = scores[best]
    rest = np.delete(scores, best)
    runner = rest.max() if len(rest) else NEG_INF
    gap = top - runner if np.isfinite(runner) else (math.inf if np.isfinite(top) else 0.0)
    return NeighborEstimate(u, sets[best], float(top), float(gap))


def reconstruct_bdd(ts: TraceSet, cfg: ScoreConfig) -> InferenceResult:
    """Edge ``{u, v}`` when ``v`` is in ``R(u)`` and precedes ``u`` in at least a third of traces."""
    t0 = time.perf_counter()
    _check(ts, cfg)
    if cfg.lam != ts.params.lam:
        raise ParameterError(f"config lambda {cfg.lam} differs from trace lambda {ts.params.lam}")
    edges = set()
    conf = {}
    estimates = []
    for u in range(ts.n):
        sets, scores, vd = candidate_scores(ts, u, cfg)
        best = int(np.argmax(scores))
        r_u = sets[best]
        estimates.append(r_u)
        for v in r_u:
            j = v if v < u else v - 1
            if 3 * int(vd.before_count[j]) >= vd.ell and vd.ell > 0:
                e = (min(u, v), max(u, v))
                edges.add(e)
                conf[e] = max(conf.get(e, 0.0), vd.before_count[j] / vd.ell)
    edges = sorted(edges)
    return InferenceResult(
        ts.n, edges, "bdd",
        confidence={e: float(conf[e]) for e in edges},
        params={"delta_max": cfg.delta_max, "lambda": cfg.lam, "partial": cfg.partial},
        stats={"traces": len(ts), "neighbor_sets": [list(r) for r in estimates]},
        wall_time=time.perf_counter() - t0,
    )


def log_density(times_before: np.ndarray, t: float, lam: float) -> float:
    """Log density of first arrival at ``t`` from independent Exp(lam) clocks
    started at ``times_before``.

    Reference for the score: ``score_i(N(u))`` plus ``log(lam)`` equals this.
    """
    started = times_before[times_before < t]
    if len(started) == 0:
        return NEG_INF
    return math.log(lam * len(started)) - lam * float(np.sum(t - started))


def pinsker_holds(p: np.ndarray, q: np.ndarray) -> bool:
    """KL(p || q) >= 2 TV(p, q)^2 for discrete distributions."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    mask = p > 0
    kl = float(np.sum(p[mask] * np.log(p[mask] / q[mask])))
    tv = 0.5 * float(np.abs(p - q).sum())
    return kl >= 2 * tv * tv - 1e-15


def score_gap_margin(delta: int) -> float:
    """Lower bound on the expected per-trace score gap for significantly different sets.

    The expected total-variation gap is at least ``delta^-2 / 40`` when the
    differing set is infected before ``u`` with probability above 1/4;
    Pinsker turns that into ``2 (delta^-2 / 40)^2``.
    """
    return delta ** -4 / 800
