"""Inference results and precision/recall/F1 against a known graph."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ValidationError
from .graph import Graph, edge_set_diff


@dataclass
class InferenceResult:
    """Predicted edge set plus bookkeeping.

    ``confidence`` maps ``(u, v)`` with ``u < v`` to a score in [0, 1].
    """

    n: int
    edges: list[tuple[int, int]]
    algorithm: str
    confidence: dict[tuple[int, int], float] = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        norm = sorted({(min(u, v), max(u, v)) for u, v in self.edges})
        if len(norm) != len(self.edges):
            raise ValidationError("duplicate edges in inference result")
        for u, v in norm:
            if u == v or u < 0 or v >= self.n:
                raise ValidationError(f"invalid edge ({u}, {v}) for n={self.n}")
        self.edges = norm

    def graph(self) -> Graph:
        return Graph(self.n, self.edges)


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    meta: dict = field(default_factory=dict, compare=False)

    def as_row(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "tp": self.tp, "fp": self.fp, "fn": self.fn, **self.meta}


def scores(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall, F1. An empty prediction has precision 0."""
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def evaluate(pred: InferenceResult | Graph, truth: Graph, **meta) -> EvalReport:
    g = pred.graph() if isinstance(pred, InferenceResult) else pred
    if g.n != truth.n:
        raise ParameterError(f"node counts differ: {g.n} != {truth.n}")
    tp, fp, fn = edge_set_diff(g, truth)
    p, r, f = scores(tp, fp, fn)
    return EvalReport(p, r, f, tp, fp, fn, meta)


def edges_array(result: InferenceResult) -> np.ndarray:
    return np.asarray(result.edges, dtype=np.int64).reshape(-1, 2)
