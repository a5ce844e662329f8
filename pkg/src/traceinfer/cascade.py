"""Cascade simulation through the percolation + shortest-path description.

Each trace deletes every edge independently with probability ``1 - p``,
gives surviving edges i.i.d. ``Exp(lambda)`` lengths, and reports the nodes
reachable from the source in distance order with their distances as
infection times.

Per-trace uniforms come from :func:`traceinfer.rng.trace_uniforms`. Row
layout: ``[source, lengths (m), keep (m, only when p < 1)]``. Lengths are
drawn as unit-rate exponentials by inverse CDF, shortest paths are computed
on those, and times are divided by ``lambda`` at the end.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import ParameterError, ValidationError
from .graph import Graph
from .rng import trace_uniforms

_CHUNK_DOUBLES = 1 << 22


@dataclass(frozen=True)
class CascadeParams:
    lam: float = 1.0
    p: float = 1.0
    source: int | None = None  # None: uniform random source

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if not 0 < self.p <= 1:
            raise ParameterError(f"p must lie in (0, 1], got {self.p}")
        if self.source is not None and self.source < 0:
            raise ParameterError("fixed source must be a node id")

    @property
    def source_policy(self) -> str:
        return "uniform" if self.source is None else "fixed"


@dataclass(frozen=True, eq=False)
class Trace:
    nodes: np.ndarray
    times: np.ndarray

    @property
    def source(self) -> int:
        return int(self.nodes[0])

    @property
    def events(self) -> list[tuple[int, float]]:
        return list(zip(self.nodes.tolist(), self.times.tolist()))

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes) and np.array_equal(self.times, other.times)

    @classmethod
    def from_events(cls, events: Sequence[tuple[int, float]]) -> "Trace":
        nodes = np.array([e[0] for e in events], dtype=np.int64)
        times = np.array([e[1] for e in events], dtype=np.float64)
        return cls(nodes, times)


class TraceSet:
    """Immutable collection of traces stored as packed flat arrays.

    ``nodes[offsets[i]:offsets[i+1]]`` and the matching slice of ``times``
    form trace ``i``.
    """

    def __init__(self, params: CascadeParams, n: int, nodes, times, offsets, graph_id: str | None = None):
        self.params = params
        self.n = int(n)
        self.nodes = np.ascontiguousarray(nodes, dtype=np.int64)
        self.times = np.ascontiguousarray(times, dtype=np.float64)
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.graph_id = graph_id
        for a in (self.nodes, self.times, self.offsets):
            a.setflags(write=False)
        self._cache: dict = {}

    @classmethod
    def from_traces(cls, params: CascadeParams, n: int, traces: Sequence[Trace], graph_id=None) -> "TraceSet":
        lens = [len(t) for t in traces]
        offsets = np.concatenate([[0], np.cumsum(lens, dtype=np.int64)])
        nodes = np.concatenate([t.nodes for t in traces]) if traces else np.empty(0, np.int64)
        times = np.concatenate([t.times for t in traces]) if traces else np.empty(0)
        return cls(params, n, nodes, times, offsets, graph_id)

    @classmethod
    def empty(cls, params: CascadeParams, n: int, graph_id=None) -> "TraceSet":
        return cls(params, n, np.empty(0, np.int64), np.empty(0), np.zeros(1, np.int64), graph_id)

    def __len__(self):
        return len(self.offsets) - 1

    def __getitem__(self, i) -> Trace:
        if isinstance(i, slice):
            raise TypeError("use TraceSet.head() or TraceSet.select() for sub-sets")
        if i < 0:
            i += len(self)
        a, b = self.offsets[i], self.offsets[i + 1]
        return Trace(self.nodes[a:b], self.times[a:b])

    def __iter__(self) -> Iterator[Trace]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, TraceSet):
            return NotImplemented
        return (
            self.params == other.params
            and self.n == other.n
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.times.view(np.uint64), other.times.view(np.uint64))
        )

    def __repr__(self):
        return f"TraceSet(n={self.n}, traces={len(self)}, lam={self.params.lam}, p={self.params.p})"

    def lengths(self) -> np.ndarray:
        return np.diff(self.offsets)

    def sources(self) -> np.ndarray:
        lens = self.lengths()
        out = np.full(len(self), -1, dtype=np.int64)
        ok = lens > 0
        out[ok] = self.nodes[self.offsets[:-1][ok]]
        return out

    def head(self, count: int) -> "TraceSet":
        """The first ``count`` traces (shares storage)."""
        count = min(count, len(self))
        end = self.offsets[count]
        return TraceSet(self.params, self.n, self.nodes[:end], self.times[:end],
                        self.offsets[:count + 1], self.graph_id)

    def select(self, index) -> "TraceSet":
        index = np.asarray(index, dtype=np.int64)
        return TraceSet.from_traces(self.params, self.n, [self[int(i)] for i in index], self.graph_id)

    def is_complete(self) -> bool:
        return bool(np.all(self.lengths() == self.n))

    def time_matrix(self) -> np.ndarray:
        """``(L, n)`` infection times, ``inf`` where a node was never reached."""
        if "tm" not in self._cache:
            L = len(self)
            tm = np.full((L, self.n), np.inf)
            rows = np.repeat(np.arange(L), self.lengths())
            tm[rows, self.nodes] = self.times
            tm.setflags(write=False)
            self._cache["tm"] = tm
        return self._cache["tm"]

    def order_matrix(self) -> np.ndarray:
        """``(L, n)`` node at each position; requires complete traces."""
        if not self.is_complete():
            raise ValidationError("order matrix needs complete traces")
        return self.nodes.reshape(len(self), self.n)

    def rank_matrix(self) -> np.ndarray:
        """``(L, n)`` position of each node in each trace; requires complete traces."""
        if "rank" not in self._cache:
            order = self.order_matrix()
            L = len(self)
            ranks = np.empty((L, self.n), dtype=np.int64)
            rows = np.repeat(np.arange(L), self.n)
            ranks[rows, order.ravel()] = np.tile(np.arange(self.n), L)
            ranks.setflags(write=False)
            self._cache["rank"] = ranks
        return self._cache["rank"]

    def validate(self) -> None:
        """Check structural invariants; raise :class:`ValidationError`."""
        if self.offsets[0] != 0 or np.any(np.diff(self.offsets) < 0) or self.offsets[-1] != len(self.nodes):
            raise ValidationError("corrupt trace offsets")
        if len(self.nodes) and (self.nodes.min() < 0 or self.nodes.max() >= self.n):
            raise ValidationError(f"node id outside 0..{self.n - 1}")
        for i, t in enumerate(self):
            if len(t) == 0:
                raise ValidationError(f"trace {i} is empty")
            if t.times[0] != 0.0:
                raise ValidationError(f"trace {i} does not start at time 0")
            if np.any(np.diff(t.times) <= 0):
                raise ValidationError(f"trace {i} has non-increasing times")
            if len(np.unique(t.nodes)) != len(t.nodes):
                raise ValidationError(f"trace {i} repeats a node")


def _draw_width(g: Graph, params: CascadeParams) -> int:
    return 1 + g.m if params.p == 1 else 1 + 2 * g.m


def cascade_inputs(g: Graph, params: CascadeParams, seed: int, start: int, count: int):
    """Sources and unit-rate edge lengths (``inf`` = deleted) for a batch."""
    m = g.m
    u = trace_uniforms(seed, start, count, _draw_width(g, params))
    if params.source is None:
        sources = np.minimum((u[:, 0] * g.n).astype(np.int64), g.n - 1)
    else:
        if params.source >= g.n:
            raise ParameterError(f"fixed source {params.source} not in graph of {g.n} nodes")
        sources = np.full(count, params.source, dtype=np.int64)
    lengths = -np.log1p(-u[:, 1:1 + m])
    if params.p < 1:
        lengths[u[:, 1 + m:1 + 2 * m] >= params.p] = np.inf
    return sources, np.ascontiguousarray(lengths)


def _simulate_chunk(args):
    g, params, seed, start, count = args
    sources, lengths = cascade_inputs(g, params, seed, start, count)
    order, times, counts = kernels.shortest_path_traces(
        g.indptr, g.adj_nodes, g.adj_edges, sources, lengths
    )
    mask = order >= 0
    return order[mask], times[mask] / params.lam, counts


def simulate_many(g: Graph, params: CascadeParams, count: int, seed: int, *,
                  start: int = 0, workers: int = 1) -> TraceSet:
    """``count`` independent traces; trace ``k`` uses stream ``(seed, start + k)``.

    The result does not depend on ``workers`` or on chunking.
    """
    if count < 0:
        raise ParameterError("trace count must be non-negative")
    if g.n == 0:
        raise ParameterError("graph has no nodes")
    if count == 0:
        return TraceSet.empty(params, g.n, g.graph_id)
    chunk = max(1, _CHUNK_DOUBLES // _draw_width(g, params))
    jobs = [(g, params, seed, start + lo, min(chunk, count - lo)) for lo in range(0, count, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_simulate_chunk, jobs))
    else:
        parts = [_simulate_chunk(j) for j in jobs]
    nodes = np.concatenate([p[0] for p in parts])
    times = np.concatenate([p[1] for p in parts])
    counts = np.concatenate([p[2] for p in parts])
    offsets = np.concatenate([[0], np.cumsum(counts)])
    return TraceSet(params, g.n, nodes, times, offsets, g.graph_id)


def simulate_one(g: Graph, params: CascadeParams, seed: int, index: int = 0) -> Trace:
    return simulate_many(g, params, 1, seed, start=index)[0]
