"""Degree estimation from first-gap statistics.

For ``ell`` traces sourced at ``v``, each gap between the source and the
second infection is ``Exp(d * lambda)``, so the gap total is
``Erlang(ell, d * lambda)`` and ``ell / (T * lambda)`` estimates ``d``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cascade import TraceSet
from .errors import EstimateUnavailable


@dataclass(frozen=True)
class DegreeEstimate:
    node: int
    ell: int
    total_gap: float
    d_hat: float


def first_gaps(ts: TraceSet) -> tuple[np.ndarray, np.ndarray]:
    """``(sources, gaps)`` over traces with at least two events."""
    off = ts.offsets
    lens = np.diff(off)
    ok = lens >= 2
    start = off[:-1][ok]
    return ts.nodes[start], ts.times[start + 1] - ts.times[start]


def gap_totals(ts: TraceSet) -> tuple[np.ndarray, np.ndarray]:
    """Per-node count of qualifying traces and the sum of their first gaps."""
    src, gaps = first_gaps(ts)
    ell = np.bincount(src, minlength=ts.n)
    total = np.bincount(src, weights=gaps, minlength=ts.n)
    return ell, total


def estimate_degree(ts: TraceSet, v: int) -> DegreeEstimate:
    src, gaps = first_gaps(ts)
    sel = gaps[src == v]
    if len(sel) == 0:
        raise EstimateUnavailable(f"no trace sourced at node {v} reaches a second node")
    total = float(sel.sum())
    return DegreeEstimate(v, len(sel), total, len(sel) / (total * ts.params.lam))


def estimate_all(ts: TraceSet) -> np.ndarray:
    """Raw estimate per node; ``nan`` where no qualifying trace exists."""
    ell, total = gap_totals(ts)
    out = np.full(ts.n, np.nan)
    ok = ell > 0
    out[ok] = ell[ok] / (total[ok] * ts.params.lam)
    return out


def round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(x) + 0.5).astype(np.int64)


def ccdf(degrees, support) -> np.ndarray:
    """Fraction of ``degrees`` that are ``>= k`` for each ``k`` in ``support``."""
    d = np.sort(np.asarray(degrees))
    if len(d) == 0:
        return np.zeros(len(support))
    return 1.0 - np.searchsorted(d, np.asarray(support), side="left") / len(d)


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance between integer samples."""
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    if len(a) == 0 or len(b) == 0:
        return 1.0 if len(a) != len(b) else 0.0
    grid = np.union1d(a, b)
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


@dataclass
class DegreeDistribution:
    d_hat: np.ndarray  # raw, nan = unknown
    rounded: np.ndarray  # -1 = unknown
    degrees: np.ndarray  # table support
    ccdf_estimated: np.ndarray
    ccdf_true: np.ndarray | None = None
    biased: bool = False  # p < 1: first gaps measure the surviving cut, not d

    @property
    def known(self) -> np.ndarray:
        return ~np.isnan(self.d_hat)

    def ks_to(self, true_degrees) -> float:
        """KS distance between estimated and true degrees over estimated nodes."""
        known = self.known
        return ks_distance(self.rounded[known], np.asarray(true_degrees)[known])

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if self.ccdf_true is None:
                w.writerow(["degree", "ccdf_estimated"])
                for k, e in zip(self.degrees.tolist(), self.ccdf_estimated.tolist()):
                    w.writerow([k, repr(e)])
            else:
                w.writerow(["degree", "ccdf_true", "ccdf_estimated"])
                for k, t, e in zip(self.degrees.tolist(), self.ccdf_true.tolist(),
                                   self.ccdf_estimated.tolist()):
                    w.writerow([k, repr(t), repr(e)])


def estimate_distribution(ts: TraceSet, true_degrees=None) -> DegreeDistribution:
    """Per-node estimates and the CCDF table ``P(D >= k)`` over estimated nodes.

    If ``true_degrees`` is given, the true CCDF over the same nodes is added.
    """
    d_hat = estimate_all(ts)
    known = ~np.isnan(d_hat)
    rounded = np.full(ts.n, -1, dtype=np.int64)
    rounded[known] = round_half_up(d_hat[known])
    est = rounded[known]
    top = int(est.max()) if len(est) else -1
    truth = None
    if true_degrees is not None:
        truth = np.asarray(true_degrees)[known]
        if len(truth):
            top = max(top, int(truth.max()))
    support = np.arange(0, top + 1)
    table_true = ccdf(truth, support) if truth is not None else None
    return DegreeDistribution(d_hat, rounded, support, ccdf(est, support), table_true,
                              biased=ts.params.p < 1)
