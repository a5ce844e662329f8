"""Independent reference implementations used only by the tests."""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from traceinfer.cascade import cascade_inputs


def scipy_times(g, params, seed, index):
    """Infection time per node (inf if never infected) via scipy's Dijkstra."""
    sources, lengths = cascade_inputs(g, params, seed, index, 1)
    w = lengths[0]
    keep = np.isfinite(w)
    e = g.edges[keep]
    mat = csr_matrix((w[keep], (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    dist = dijkstra(mat, directed=False, indices=int(sources[0]))
    return dist / params.lam


def brute_witness(tm, u, v):
    """Literal search over (p, i, j) for the pruning pattern."""
    L, n = tm.shape
    for p in range(n):
        if p in (u, v):
            continue
        a = any(tm[i, p] < tm[i, u] < tm[i, v] for i in range(L))
        b = any(tm[j, p] < tm[j, v] < tm[j, u] for j in range(L))
        if a and b:
            return True
    return False
