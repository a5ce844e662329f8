"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import itertools
import math
import time

import numpy as np

from traceinfer import CascadeParams, GraphSpec, generate
from traceinfer.cascade import cascade_inputs
from traceinfer.kernels import available_backends


def _best(fn, repeat):
    out = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def cases():
    g = generate(GraphSpec("barabasi_albert", 1024, m=3, seed=0))
    src, lengths = cascade_inputs(g, CascadeParams(), 0, 0, 200)
    yield "dijkstra BA n=1024 x200", lambda b: b.shortest_path_traces(g.indptr, g.adj_nodes, g.adj_edges, src, lengths)

    rng = np.random.default_rng(0)
    times = rng.exponential(size=(64, 256))
    yield "tree_costs n=256 l=64", lambda b: b.tree_costs(times)

    L, n = 64, 128
    order = np.array([rng.permutation(n) for _ in range(L)], dtype=np.int64)
    ranks = np.empty_like(order)
    for i in range(L):
        ranks[i, order[i]] = np.arange(n)
    pairs = [(int(u), int(v)) for u, v in rng.integers(0, n, size=(300, 2)) if u != v]
    yield "witness n=128 l=64 x300", lambda b: [b.has_witness(order, ranks, u, v) for u, v in pairs]

    before = (rng.random((5000, 15)) < 0.5).astype(np.uint8)
    sets = np.array(list(itertools.combinations(range(15), 3)), dtype=np.int64)
    yield "set_count_hist l=5000 C(15,3)", lambda b: b.set_count_hist(before, sets)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    names = list(backends)
    print(f"{'kernel':34s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases():
        t = {n: _best(lambda: fn(backends[n]), args.repeat) for n in names}
        row = f"{label:34s}" + "".join(f"{t[n]:11.4f}s" for n in names)
        if "cython" in t:
            row += f"{t['python'] / t['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
