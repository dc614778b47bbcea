"""Large randomized runs; deselected by default, run with `pytest -m slow`."""

import time
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from inpart.experiments.sweep import sparsity_frequency
from inpart.graph.config import GenSpec
from inpart.graph.core import (
    DemandFunctions,
    Graph,
    Partition,
    is_four_sparse,
    move_delta_w,
    potential_w,
    verify_internal,
)
from inpart.graph.generation import named_graph, random_regular
from inpart.solvers.config import HeuristicConfig, OracleLimits
from inpart.solvers.constructive import (
    Absorb,
    Release,
    ShedPair,
    find_internal_partition_4sparse,
    run_constructive,
)
from inpart.solvers.degeneracy import is_degenerate, peel_core
from inpart.solvers.heuristic import local_search
from inpart.solvers.oracle import (
    brute_force_degenerate,
    brute_force_four_sparse,
    brute_force_internal_union,
    brute_force_partition,
)

pytestmark = pytest.mark.slow

SIZE_CHANGE = {"absorb": 1, "shed_pair": -2, "release": -1}


def _sparse_regular_graphs() -> list[tuple[Graph, int]]:
    # the configuration model is hopeless for d > 4, so those come from pairing
    graphs = []
    for d in (4, 6, 8, 10):
        for n in (20, 50, 100, 500):
            if d >= n:
                continue
            for seed in range(60):
                method = "configuration" if d <= 4 else "pairing"
                g = random_regular(GenSpec(n=n, d=d, seed=seed, method=method))
                if is_four_sparse(g).sparse:
                    graphs.append((g, d))
    return graphs


def _check_steps(trace: tuple) -> None:
    for before, step in zip((None, *trace), trace):
        match step:
            case Absorb():
                assert step.delta_w >= 2
            case ShedPair():
                assert step.delta_w >= 0
                assert not step.extra_c_neighbours
            case Release():
                assert step.delta_w >= 0
        if before is not None:
            assert (before.w, -before.size) < (step.w, -step.size)
            assert step.size - before.size == SIZE_CHANGE[step.kind]


def test_constructive_on_sparse_regular_graphs() -> None:
    graphs = _sparse_regular_graphs()
    assert len(graphs) >= 50
    for g, d in graphs:
        dem = DemandFunctions.constant(g.n, d // 2, d // 2)
        start = time.perf_counter()
        result = run_constructive(g, dem)
        if g.n == 500:
            assert time.perf_counter() - start < 2
        assert verify_internal(g, result.partition, dem).ok
        _check_steps(result.state.trace)


def test_constructive_on_circulants() -> None:
    # every split a + b = d with a, b >= 2
    runs = steps = 0
    for n in range(9, 31):
        for k in (2, 3):
            for offsets in combinations(range(1, (n + 1) // 2), k):
                g = named_graph("circulant", [n, *offsets])
                if not is_four_sparse(g).sparse:
                    continue
                for a in range(2, 2 * k - 1):
                    dem = DemandFunctions.constant(n, a, 2 * k - a)
                    result = run_constructive(g, dem)
                    assert verify_internal(g, result.partition, dem).ok
                    _check_steps(result.state.trace)
                    runs += 1
                    steps += len(result.state.trace)
    assert runs >= 500
    assert steps > 0


def _four_sparse_corpus(rng: np.random.Generator, size: int) -> list[Graph]:
    """4-sparse graphs on at most 12 vertices with minimum degree at least 4.

    Relabeled circulants and dense bipartite graphs, which have no triangles.
    """
    circulants = []
    for n in range(9, 13):
        for offsets in combinations(range(1, (n + 1) // 2), 2):
            circulants.append(named_graph("circulant", [n, *offsets]))
            if n % 2 == 0:
                circulants.append(named_graph("circulant", [n, *offsets, n // 2]))
    circulants = [g for g in circulants if is_four_sparse(g).sparse]

    graphs: list[Graph] = []
    for attempt in range(20 * size):
        if len(graphs) == size:
            break
        if attempt % 3 == 0:
            base = circulants[int(rng.integers(len(circulants)))]
            relabeling = dict(enumerate(rng.permutation(base.n).tolist()))
            g = Graph.from_networkx(nx.relabel_nodes(base.to_networkx(), relabeling))
        else:
            n = int(rng.integers(8, 13))
            left = n // 2 + int(rng.integers(0, 2))
            p = float(rng.uniform(0.7, 1.0))
            g = Graph.from_networkx(
                nx.bipartite.random_graph(left, n - left, p, seed=attempt)
            )
        if g.degrees.min() >= 4 and is_four_sparse(g).sparse:
            graphs.append(g)
    return graphs


def test_oracle_agrees_with_constructive_preconditions(limits: OracleLimits) -> None:
    rng = np.random.default_rng(77)
    checked = 0
    for g in _four_sparse_corpus(rng, 300):
        degrees = g.degrees
        a = np.array([rng.integers(2, d - 1) for d in degrees.tolist()])
        dem = DemandFunctions(a=tuple(a.tolist()), b=tuple((degrees - a).tolist()))
        assert brute_force_partition(g, dem, limits) is not None
        assert verify_internal(g, find_internal_partition_4sparse(g, dem), dem).ok
        checked += 1
    assert checked >= 300


def test_small_named_graphs_against_the_oracle(limits: OracleLimits) -> None:
    for name, params in (("complete", [4]), ("complete", [5]), ("complete_bipartite", [3, 3])):
        g = named_graph(name, params)
        assert brute_force_partition(g, DemandFunctions.internal(g), limits) is None
    petersen = named_graph("petersen")
    assert brute_force_partition(petersen, DemandFunctions.internal(petersen), limits)


def test_heuristic_converges_within_5n() -> None:
    runs = within_5n = 0
    for n in (30, 100, 300, 1000):
        for d in (4, 6, 10, 20):
            if (n * d) % 2 or d >= n:
                continue
            for seed in range(20):
                g = random_regular(GenSpec(n=n, d=d, seed=seed, method="pairing"))
                dem = DemandFunctions.internal(g)
                result = local_search(g, dem, HeuristicConfig(seed=seed, max_iters=50 * n))
                assert result.converged, f"n={n}, d={d}, seed={seed}"
                assert result.partition is not None
                assert verify_internal(g, result.partition, dem).ok
                runs += 1
                within_5n += result.iterations < 5 * n
    assert within_5n >= 0.9 * runs


def test_four_sparsity_becomes_likely() -> None:
    fractions = sparsity_frequency([100, 1000], 4, 200, 0, max_workers=4)
    assert 1 - fractions[1000] < 1 - fractions[100]
    assert 1 - fractions[1000] <= 0.15


def test_delta_w_on_exact_demands() -> None:
    rng = np.random.default_rng(6)
    for i in range(1000):
        d = int(rng.choice([4, 6]))
        n = int(rng.integers(d + 2, 30)) // 2 * 2
        g = random_regular(GenSpec(n=n, d=d, seed=i, method="pairing"))
        a = rng.integers(2, d - 1, size=n)
        dem = DemandFunctions(a=tuple(a.tolist()), b=tuple((d - a).tolist()))
        p = Partition.from_mask(rng.random(n) < 0.5)
        x = int(rng.integers(n))
        assert move_delta_w(g, p, dem, x) == potential_w(g, p.moved(x), dem) - potential_w(
            g, p, dem
        )


def test_peeling_against_enumeration(
    small_graphs: list[Graph], limits: OracleLimits
) -> None:
    rng = np.random.default_rng(8)
    for g in small_graphs:
        subset = [x for x in range(g.n) if rng.random() < 0.8]
        f = rng.integers(0, 4, size=g.n)
        assert is_degenerate(g, subset, f) == brute_force_degenerate(g, subset, f, limits)
        core = peel_core(g, subset, f).core
        assert core == brute_force_internal_union(g, subset, f + 1, limits)
        for _ in range(100):
            priority = rng.permutation(g.n).tolist()
            assert peel_core(g, subset, f, priority=priority).core == core


def test_four_sparse_edge_scan(small_graphs: list[Graph], limits: OracleLimits) -> None:
    for g in small_graphs:
        assert is_four_sparse(g).sparse == brute_force_four_sparse(g, limits)
    assert not is_four_sparse(named_graph("complete", [4])).sparse
    assert not is_four_sparse(named_graph("diamond")).sparse
    assert is_four_sparse(named_graph("path", [8])).sparse
    assert is_four_sparse(named_graph("circulant", [9, 1, 3])).sparse
