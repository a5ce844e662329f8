"""Undirected simple graphs, the experimental graph families, and edge-list I/O.

Nodes are the integers ``0 .. n-1``. A :class:`Graph` is immutable once
built and keeps a CSR adjacency (``indptr``, ``adj_nodes``, ``adj_edges``)
that the compiled kernels index directly.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import rng as _rng
from .errors import ParameterError, ParseError, ValidationError


class Graph:
    """Undirected simple graph on nodes ``0 .. n-1``.

    ``edges`` is an ``(m, 2)`` int64 array of pairs with ``u < v``, sorted
    lexicographically. Edge ``k`` of the CSR view refers to row ``k``.
    """

    __slots__ = ("n", "edges", "indptr", "adj_nodes", "adj_edges", "_edge_set", "graph_id")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), graph_id: str | None = None):
        if n < 0:
            raise ParameterError(f"node count must be non-negative, got {n}")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValidationError(f"edge endpoint out of range for n={n}")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValidationError("self-loops are not allowed")
            arr = np.sort(arr, axis=1)
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            arr = arr[order]
            dup = np.all(arr[1:] == arr[:-1], axis=1)
            if np.any(dup):
                u, v = arr[1:][dup][0]
                raise ValidationError(f"duplicate edge {{{u}, {v}}}")
        self.n = int(n)
        self.edges = arr
        self.edges.setflags(write=False)
        self.graph_id = graph_id
        self._edge_set = None
        self._build_csr()

    def _build_csr(self):
        m = len(self.edges)
        ends = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        others = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        eids = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
        order = np.lexsort((others, ends))
        counts = np.bincount(ends, minlength=self.n) if m else np.zeros(self.n, dtype=np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.adj_nodes = others[order].astype(np.int64)
        self.adj_edges = eids[order]
        for a in (self.indptr, self.adj_nodes, self.adj_edges):
            a.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj_nodes[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self._edge_set is None:
            self._edge_set = frozenset(map(tuple, self.edges.tolist()))
        return self._edge_set

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set()

    def components(self) -> np.ndarray:
        """Component label per node (labels are the smallest node in each)."""
        label = np.full(self.n, -1, dtype=np.int64)
        for s in range(self.n):
            if label[s] >= 0:
                continue
            label[s] = s
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.neighbors(x):
                    if label[y] < 0:
                        label[y] = s
                        queue.append(y)
        return label

    def is_connected(self) -> bool:
        return self.n <= 1 or bool(np.all(self.components() == 0))

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def edge_set_diff(predicted: Graph, truth: Graph) -> tuple[int, int, int]:
    """``(true_positives, false_positives, false_negatives)`` of two edge sets."""
    if predicted.n != truth.n:
        raise ParameterError(f"node counts differ: {predicted.n} != {truth.n}")
    p, t = predicted.edge_set(), truth.edge_set()
    tp = len(p & t)
    return tp, len(p) - tp, len(t) - tp


# -- families -----------------------------------------------------------------

FAMILIES = (
    "barabasi_albert",
    "gnp",
    "power_law_tree",
    "uniform_random_tree",
    "clique",
    "clique_minus_edge",
    "path",
    "cycle",
    "star",
    "random_regular",
    "custom_edge_list",
)


@dataclass(frozen=True)
class GraphSpec:
    family: str
    n: int
    m: int = 1
    p: float = 0.2
    exponent: float = 3.0
    degree: int = 3
    seed: int = 0
    edges: tuple = field(default=(), compare=True)

    def validate(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown graph family {self.family!r}")
        if self.n < 1:
            raise ParameterError("n must be at least 1")
        if self.family == "gnp" and not 0 < self.p < 1:
            raise ParameterError(f"gnp needs 0 < p < 1, got {self.p}")
        if self.family == "barabasi_albert":
            if self.m < 1:
                raise ParameterError(f"barabasi_albert needs m >= 1, got {self.m}")
            if self.n <= self.m:
                raise ParameterError("barabasi_albert needs n > m")
        if self.family == "power_law_tree" and not self.exponent > 1:
            raise ParameterError(f"power_law_tree needs exponent > 1, got {self.exponent}")
        if self.family == "clique_minus_edge" and self.n < 2:
            raise ParameterError("clique_minus_edge needs n >= 2")
        if self.family == "cycle" and self.n < 3:
            raise ParameterError("cycle needs n >= 3")
        if self.family == "random_regular":
            d = self.degree
            if d < 0 or d >= self.n or (d * self.n) % 2:
                raise ParameterError(f"no simple {d}-regular graph on {self.n} nodes")

    def to_dict(self) -> dict:
        out = {"family": self.family, "n": self.n, "seed": self.seed}
        if self.family == "barabasi_albert":
            out["m"] = self.m
        elif self.family == "gnp":
            out["p"] = self.p
        elif self.family == "power_law_tree":
            out["exponent"] = self.exponent
        elif self.family == "random_regular":
            out["degree"] = self.degree
        elif self.family == "custom_edge_list":
            out["edges"] = [list(e) for e in self.edges]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "GraphSpec":
        d = dict(d)
        if "edges" in d:
            d["edges"] = tuple(tuple(e) for e in d["edges"])
        return cls(**d)


def clique(n: int) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    return Graph(n, np.stack([iu, ju], axis=1), graph_id=f"clique-{n}")


def clique_minus_edge(n: int) -> Graph:
    """Complete graph on ``n`` nodes without the edge ``{0, 1}``."""
    iu, ju = np.triu_indices(n, k=1)
    keep = ~((iu == 0) & (ju == 1))
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1), graph_id=f"clique-minus-edge-{n}")


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)], graph_id=f"path-{n}")


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], graph_id=f"cycle-{n}")


def star(n_leaves: int) -> Graph:
    """Star with center 0 and leaves ``1 .. n_leaves``."""
    return Graph(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)], graph_id=f"star-{n_leaves}")


def gnp(n: int, p: float, gen: np.random.Generator) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    keep = gen.random(len(iu)) < p
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1))


def barabasi_albert(n: int, m: int, gen: np.random.Generator) -> Graph:
    """Preferential attachment grown from an ``m``-clique.

    Each later node links to ``m`` distinct existing nodes drawn from the
    degree urn. With ``m == 1`` the seed is a single node of degree zero, so
    the second node attaches to it directly.
    """
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    urn: list[int] = [x for e in edges for x in e]
    for new in range(m, n):
        targets: set[int] = set()
        if not urn:
            targets = set(range(new))
        while len(targets) < m:
            targets.add(urn[int(gen.integers(len(urn)))])
        for t in sorted(targets):
            edges.append((t, new))
            urn.extend((t, new))
    return Graph(n, edges)


def _prufer_decode(seq: np.ndarray, n: int) -> list[tuple[int, int]]:
    degree = np.ones(n, dtype=np.int64)
    np.add.at(degree, seq, 1)
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def uniform_random_tree(n: int, gen: np.random.Generator) -> Graph:
    """Uniform labeled tree via a random Prufer sequence."""
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, [(0, 1)])
    return Graph(n, _prufer_decode(gen.integers(0, n, size=n - 2), n))


def tree_from_degrees(degrees: np.ndarray, gen: np.random.Generator) -> list[tuple[int, int]]:
    """Uniform random labeled tree with the given degree sequence.

    Node ``v`` appears ``degrees[v] - 1`` times in a Prufer sequence; a
    uniform shuffle of that multiset is a uniform tree with those degrees.
    """
    n = len(degrees)
    if n == 1:
        return []
    if degrees.min() < 1 or degrees.sum() != 2 * (n - 1):
        raise ParameterError("not a tree degree sequence")
    if n == 2:
        return [(0, 1)]
    seq = np.repeat(np.arange(n), degrees - 1)
    return _prufer_decode(gen.permutation(seq), n)


def power_law_tree(n: int, exponent: float, gen: np.random.Generator) -> Graph:
    """Tree whose degree sequence is drawn from a discrete power law.

    Degrees are sampled i.i.d. from ``P(d) ~ d^-exponent`` (d >= 1, capped at
    n-1), then pushed to the tree total ``2(n-1)``: surplus is trimmed from
    nodes picked in proportion to ``d - 1``, a deficit is filled by nodes
    picked in proportion to ``d``. The tree is uniform among those with that
    degree sequence.
    """
    if n == 1:
        return Graph(1)
    deg = np.minimum(gen.zipf(exponent, size=n), n - 1).astype(np.int64)
    target = 2 * (n - 1)
    while deg.sum() != target:
        diff = target - int(deg.sum())
        if diff > 0:
            w = deg / deg.sum()
            picks = gen.choice(n, size=diff, p=w)
            np.add.at(deg, picks, 1)
            deg = np.minimum(deg, n - 1)
        else:
            excess = (deg - 1).astype(float)
            picks = gen.choice(n, size=min(-diff, int(excess.sum())), p=excess / excess.sum())
            np.subtract.at(deg, picks, 1)
            deg = np.maximum(deg, 1)
    return Graph(n, tree_from_degrees(deg, gen))


def random_regular(n: int, d: int, gen: np.random.Generator, max_tries: int = 10_000) -> Graph:
    """Uniform simple ``d``-regular graph by rejection on the pairing model."""
    if d == 0:
        return Graph(n)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = gen.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        p = np.sort(pairs, axis=1)
        if len(np.unique(p[:, 0] * n + p[:, 1])) < len(p):
            continue
        return Graph(n, p)
    raise ParameterError(f"could not sample a simple {d}-regular graph on {n} nodes")


def generate(spec: GraphSpec) -> Graph:
    spec.validate()
    gen = _rng.generator(spec.seed, "graph")
    f, n = spec.family, spec.n
    if f == "clique":
        g = clique(n)
    elif f == "clique_minus_edge":
        g = clique_minus_edge(n)
    elif f == "path":
        g = path(n)
    elif f == "cycle":
        g = cycle(n)
    elif f == "star":
        g = star(n - 1)
    elif f == "gnp":
        g = gnp(n, spec.p, gen)
    elif f == "barabasi_albert":
        g = barabasi_albert(n, spec.m, gen)
    elif f == "uniform_random_tree":
        g = uniform_random_tree(n, gen)
    elif f == "power_law_tree":
        g = power_law_tree(n, spec.exponent, gen)
    elif f == "random_regular":
        g = random_regular(n, spec.degree, gen)
    else:
        g = Graph(n, spec.edges)
    g.graph_id = spec_id(spec)
    return g


def spec_id(spec: GraphSpec) -> str:
    parts = [spec.family, f"n{spec.n}"]
    if spec.family == "barabasi_albert":
        parts.append(f"m{spec.m}")
    elif spec.family == "gnp":
        parts.append(f"p{spec.p:g}")
    elif spec.family == "power_law_tree":
        parts.append(f"a{spec.exponent:g}")
    elif spec.family == "random_regular":
        parts.append(f"d{spec.degree}")
    if spec.family in ("barabasi_albert", "gnp", "power_law_tree", "uniform_random_tree", "random_regular"):
        parts.append(f"s{spec.seed}")
    return "-".join(parts)


# -- edge-list text format ----------------------------------------------------

def write_edge_list(g: Graph, path: str | Path) -> None:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_edge_list(path: str | Path) -> Graph:
    """Parse the ``n <count>`` + ``u v`` edge-list format.

    Self-loops, duplicates, ``u >= v`` and out-of-range ids are rejected with
    the offending line number.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file, expected header 'n <count>'", line=1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise ParseError(f"expected header 'n <count>', got {lines[0]!r}", line=1)
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError(f"bad node count {head[1]!r}", line=1) from None
    if n < 0:
        raise ParseError("node count must be non-negative", line=1)
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", line=lineno) from None
        if u == v:
            raise ValidationError(f"self-loop on node {u}", line=lineno)
        if u > v:
            raise ValidationError(f"pair must satisfy u < v, got {u} {v}", line=lineno)
        if u < 0 or v >= n:
            raise ValidationError(f"node id out of range for n={n}", line=lineno)
        if (u, v) in seen:
            raise ValidationError(f"duplicate edge {u} {v}", line=lineno)
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)
