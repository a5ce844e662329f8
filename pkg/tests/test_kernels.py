"""The compiled and numpy backends must agree exactly."""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from traceinfer import kernels

BACKENDS = kernels.available_backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def _random_orders(rng, L, n):
    order = np.array([rng.permutation(n) for _ in range(L)], dtype=np.int64).reshape(L, n)
    ranks = np.empty_like(order)
    for i in range(L):
        ranks[i, order[i]] = np.arange(n)
    return order, ranks


def test_backend_names():
    assert kernels.BACKEND in BACKENDS
    assert BACKENDS["python"].NAME == "python"


@needs_both
@settings(max_examples=50, deadline=None)
@given(L=st.integers(1, 9), n=st.integers(2, 12), seed=st.integers(0, 10 ** 6))
def test_tree_costs_agree(L, n, seed):
    rng = np.random.default_rng(seed)
    times = rng.exponential(size=(L, n))
    a = BACKENDS["python"].tree_costs(times)
    b = BACKENDS["cython"].tree_costs(times)
    assert np.array_equal(a, b)


def test_tree_costs_lower_median():
    times = np.array([[0.0, 1.0], [0.0, 3.0], [0.0, 2.0], [0.0, 10.0]])
    for b in BACKENDS.values():
        c = b.tree_costs(times)
        assert c[0, 1] == 2.0 and c[1, 0] == 2.0 and c[0, 0] == 0.0


@needs_both
@settings(max_examples=50, deadline=None)
@given(L=st.integers(1, 8), n=st.integers(3, 10), seed=st.integers(0, 10 ** 6))
def test_witness_agrees(L, n, seed):
    rng = np.random.default_rng(seed)
    order, ranks = _random_orders(rng, L, n)
    for u, v in itertools.combinations(range(n), 2):
        assert (BACKENDS["python"].has_witness(order, ranks, u, v)
                == BACKENDS["cython"].has_witness(order, ranks, u, v))


def test_set_count_hist_reference(rng):
    L, N = 40, 7
    before = (rng.random((L, N)) < 0.4).astype(np.uint8)
    for k in range(4):
        sets = np.array(list(itertools.combinations(range(N), k)), dtype=np.int64).reshape(math.comb(N, k), k)
        expect = np.zeros((len(sets), k + 1), dtype=np.int64)
        for r, s in enumerate(sets):
            for i in range(L):
                expect[r, int(before[i, list(s)].sum())] += 1
        for b in BACKENDS.values():
            assert np.array_equal(b.set_count_hist(before, sets), expect)
