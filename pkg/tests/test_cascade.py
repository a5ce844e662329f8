import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import sim
from oracles import scipy_times
from traceinfer import CascadeParams, Graph, GraphSpec, TraceSet, generate, simulate_many, simulate_one
from traceinfer import kernels, rng
from traceinfer.errors import ParameterError, ValidationError
from traceinfer.graph import cycle, path, star


def test_params_validation():
    for bad in (dict(lam=0), dict(lam=-1), dict(p=0), dict(p=1.5), dict(source=-2)):
        with pytest.raises(ParameterError):
            CascadeParams(**bad)


def test_trace_invariants(small_graphs):
    for g in small_graphs:
        for p in (1.0, 0.5):
            ts = sim(g, 50, seed=3, p=p)
            ts.validate()
            if p == 1.0 and g.is_connected():
                assert ts.is_complete()


def test_times_match_scipy_oracle(small_graphs):
    for g in small_graphs:
        for p, lam in ((1.0, 1.0), (0.4, 2.5)):
            params = CascadeParams(lam, p)
            ts = simulate_many(g, params, 20, seed=11)
            for k in range(20):
                ref = scipy_times(g, params, 11, k)
                got = ts.time_matrix()[k]
                assert np.array_equal(got, ref)


def test_bulk_equals_per_trace():
    g = generate(GraphSpec("gnp", 25, p=0.2, seed=1))
    params = CascadeParams(1.0, 0.7)
    ts = simulate_many(g, params, 30, seed=5)
    for k in (0, 7, 29):
        assert simulate_one(g, params, 5, k) == ts[k]
    tail = simulate_many(g, params, 10, seed=5, start=20)
    assert all(tail[i] == ts[20 + i] for i in range(10))


def test_chunking_and_workers_do_not_matter(monkeypatch):
    import traceinfer.cascade as cascade
    g = cycle(12)
    ref = sim(g, 40, seed=9)
    monkeypatch.setattr(cascade, "_CHUNK_DOUBLES", 50)
    assert sim(g, 40, seed=9) == ref
    assert simulate_many(g, CascadeParams(), 40, 9, workers=2) == ref


def test_prefix_property():
    g = star(5)
    assert sim(g, 100, seed=2).head(40) == sim(g, 40, seed=2)


def test_lambda_scaling_power_of_two():
    g = path(6)
    a = sim(g, 30, seed=4, lam=1.0)
    b = sim(g, 30, seed=4, lam=4.0)
    assert np.array_equal(a.nodes, b.nodes)
    assert np.array_equal(a.times / 4.0, b.times)


def test_lambda_scaling_general():
    g = path(6)
    a = sim(g, 30, seed=4, lam=1.0)
    b = sim(g, 30, seed=4, lam=3.0)
    np.testing.assert_allclose(a.times / 3.0, b.times, rtol=1e-15)


def test_fixed_source():
    ts = sim(cycle(8), 10, source=3)
    assert set(ts.sources().tolist()) == {3}
    with pytest.raises(ParameterError):
        sim(cycle(8), 1, source=8)


def test_isolated_source_gives_singleton():
    g = Graph(3, [(0, 1)])
    ts = sim(g, 5, source=2)
    assert ts.lengths().tolist() == [1] * 5


def test_empty_and_zero():
    assert len(sim(cycle(5), 0)) == 0
    with pytest.raises(ParameterError):
        sim(cycle(5), -1)


def test_source_uniform():
    ts = sim(cycle(10), 20000, seed=1)
    counts = np.bincount(ts.sources(), minlength=10)
    assert np.all(np.abs(counts - 2000) < 4 * np.sqrt(2000 * 0.9))


def test_first_gap_is_exponential_with_degree_rate():
    ts = sim(star(6), 20000, seed=3, lam=2.0, source=0)
    gaps = ts.times[ts.offsets[:-1] + 1]
    assert abs(gaps.mean() - 1 / 12) < 4 * (1 / 12) / np.sqrt(20000)


def test_percolation_reach_on_path():
    # with p on a path from an end, reach length is geometric
    ts = sim(path(30), 20000, seed=8, p=0.5, source=0)
    assert abs(ts.lengths().mean() - 2.0) < 0.05


def test_traceset_access():
    ts = sim(cycle(5), 6)
    assert len(list(ts)) == 6 and ts[-1] == ts[5]
    with pytest.raises(TypeError):
        ts[1:3]
    sub = ts.select([4, 1])
    assert sub[0] == ts[4] and sub[1] == ts[1]
    assert ts.rank_matrix()[0, ts.order_matrix()[0]].tolist() == list(range(5))


def test_order_matrix_needs_complete():
    ts = sim(Graph(3, [(0, 1)]), 5)
    with pytest.raises(ValidationError):
        ts.order_matrix()


def test_traceset_readonly():
    ts = sim(cycle(5), 3)
    with pytest.raises(ValueError):
        ts.times[0] = 1.0


def test_rng_purposes_independent():
    a = rng.generator(1, "graph").random(4)
    b = rng.generator(1, "cascade").random(4)
    assert not np.array_equal(a, b)
    with pytest.raises(ValueError):
        rng.generator(-1, "graph")


def test_trace_uniforms_block_addressing():
    full = rng.trace_uniforms(3, 0, 10, 7)
    part = rng.trace_uniforms(3, 6, 4, 7)
    assert np.array_equal(full[6:], part)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 15), prob=st.floats(0.1, 0.9), seed=st.integers(0, 2 ** 31),
       p=st.sampled_from([1.0, 0.6]))
def test_property_times_strictly_increase_and_match_oracle(n, prob, seed, p):
    g = generate(GraphSpec("gnp", n, p=prob, seed=seed % 1000))
    params = CascadeParams(1.5, p)
    ts = simulate_many(g, params, 3, seed)
    ts.validate()
    for k in range(3):
        assert np.array_equal(ts.time_matrix()[k], scipy_times(g, params, seed, k))


def test_backends_agree_on_dijkstra():
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled extension not built")
    from traceinfer.cascade import cascade_inputs
    for seed in range(5):
        g = generate(GraphSpec("gnp", 60, p=0.08, seed=seed))
        for p in (1.0, 0.4):
            src, lengths = cascade_inputs(g, CascadeParams(1.0, p), seed, 0, 50)
            outs = [b.shortest_path_traces(g.indptr, g.adj_nodes, g.adj_edges, src, lengths)
                    for b in backends.values()]
            for x, y in zip(outs[0], outs[1]):
                assert np.array_equal(x, y)


def test_tie_bump_strictly_increasing():
    # two nodes at identical distance: emitted in node order, second bumped one ulp
    g = Graph(3, [(0, 1), (0, 2)])
    lengths = np.array([[0.5, 0.5]])
    for b in kernels.available_backends().values():
        order, times, counts = b.shortest_path_traces(g.indptr, g.adj_nodes, g.adj_edges,
                                                      np.array([0]), lengths)
        assert order[0].tolist() == [0, 1, 2]
        assert times[0, 1] == 0.5 and times[0, 2] == np.nextafter(0.5, 1)
