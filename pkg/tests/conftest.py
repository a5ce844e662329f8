import numpy as np
import pytest

from traceinfer import CascadeParams, Graph, GraphSpec, generate, simulate_many
from traceinfer.graph import cycle, path, star

DATA = __import__("pathlib").Path(__file__).parent / "data"


def cube() -> Graph:
    """3-cube: 8 nodes, 3-regular."""
    return Graph(8, [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)])


def sim(g, count, seed=0, lam=1.0, p=1.0, source=None):
    return simulate_many(g, CascadeParams(lam, p, source), count, seed)


@pytest.fixture
def small_graphs():
    return [
        path(5),
        cycle(7),
        star(6),
        cube(),
        generate(GraphSpec("gnp", 30, p=0.15, seed=2)),
        generate(GraphSpec("barabasi_albert", 40, m=2, seed=1)),
        generate(GraphSpec("uniform_random_tree", 25, seed=4)),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
