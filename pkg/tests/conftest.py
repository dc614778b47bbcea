from collections.abc import Callable

import networkx as nx
import numpy as np
import pytest

from inpart.graph.core import Graph
from inpart.graph.generation import named_graph
from inpart.solvers.config import OracleLimits


@pytest.fixture
def petersen() -> Graph:
    return named_graph("petersen")


@pytest.fixture
def c9_13() -> Graph:
    """The circulant graph on 9 vertices with offsets 1 and 3"""
    return named_graph("circulant", [9, 1, 3])


@pytest.fixture
def c6() -> Graph:
    return named_graph("cycle", [6])


@pytest.fixture
def k4() -> Graph:
    return named_graph("complete", [4])


@pytest.fixture
def k5() -> Graph:
    return named_graph("complete", [5])


@pytest.fixture
def diamond() -> Graph:
    return named_graph("diamond")


@pytest.fixture
def limits() -> OracleLimits:
    return OracleLimits(max_workers=1)


@pytest.fixture
def small_graphs() -> list[Graph]:
    """500 random graphs on 1 to 10 vertices with varying density."""
    rng = np.random.default_rng(20240611)
    graphs = []
    for i in range(500):
        n = int(rng.integers(1, 11))
        p = float(rng.uniform(0.1, 0.9))
        graphs.append(Graph.from_networkx(nx.gnp_random_graph(n, p, seed=i)))
    return graphs


@pytest.fixture
def random_tree() -> Callable[[int, int], Graph]:
    """Builds a uniformly random labeled tree on n >= 3 vertices from a seed."""

    def build(n: int, seed: int) -> Graph:
        rng = np.random.default_rng(seed)
        sequence = rng.integers(0, n, size=n - 2).tolist()
        return Graph.from_networkx(nx.from_prufer_sequence(sequence))

    return build
