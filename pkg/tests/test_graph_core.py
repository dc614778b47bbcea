import networkx as nx
import numpy as np
import pytest

from inpart.graph.config import GenSpec
from inpart.graph.core import (
    DemandFunctions,
    DemandMismatchError,
    Graph,
    GraphFormatError,
    Partition,
    VertexRangeError,
    Violation,
    common_neighbors,
    cut_size,
    degree_in_subset,
    is_four_sparse,
    move_delta_w,
    potential_w,
    require_exact_demands,
    same_side_degrees,
    verify_internal,
)
from inpart.graph.generation import random_regular


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 0)],
        [(0, 1), (1, 0)],
        [(0, 1), (0, 1)],
        [(0, 3)],
        [(-1, 2)],
    ],
)
def test_from_edges_rejects_malformed_edges(edges: list[tuple[int, int]]) -> None:
    with pytest.raises(GraphFormatError):
        Graph.from_edges(3, edges)


def test_adjacency_must_be_symmetric() -> None:
    with pytest.raises(GraphFormatError):
        Graph(n=2, adjacency=((1,), ()))


def test_edges_are_canonical() -> None:
    g = Graph.from_edges(4, [(3, 1), (2, 0), (1, 0)])
    assert list(g.edges()) == [(0, 1), (0, 2), (1, 3)]
    assert g.m == 3
    assert g.degrees.tolist() == [2, 2, 1, 1]


def test_vertex_range_is_checked() -> None:
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(VertexRangeError):
        g.degree(3)
    with pytest.raises(VertexRangeError):
        Partition.from_side_a(3, [0, 5])


def test_networkx_conversion_keeps_the_numbering(petersen: Graph) -> None:
    reference = nx.petersen_graph()
    assert petersen.n == 10
    assert petersen.m == 15
    assert set(petersen.edges()) == {tuple(sorted(e)) for e in reference.edges()}
    assert Graph.from_networkx(petersen.to_networkx()) == petersen


def test_induced_edge_count(k4: Graph) -> None:
    assert k4.induced_edge_count({0, 1, 2}) == 3
    assert k4.induced_edge_count([3]) == 0


def test_partition_sides() -> None:
    p = Partition.from_side_a(5, [0, 3])
    assert p.side_a == {0, 3}
    assert p.side_b == {1, 2, 4}
    assert p.side_of(3) == "A"
    assert p.moved(3).side_a == {0}
    assert p.moved(1).side_a == {0, 1, 3}
    assert Partition.from_mask(p.mask) == p


def test_degrees_on_c6(c6: Graph) -> None:
    p = Partition.from_side_a(6, [0, 1, 2])
    assert same_side_degrees(c6, p).tolist() == [1, 2, 1, 1, 2, 1]
    assert cut_size(c6, p) == 2
    assert degree_in_subset(c6, 0, {1, 5}) == 2


def test_arc_split_of_c6_is_internal(c6: Graph) -> None:
    report = verify_internal(
        c6, Partition.from_side_a(6, [0, 1, 2]), DemandFunctions.constant(6, 1, 1)
    )
    assert report.ok


def test_every_vertex_of_k4_falls_short(k4: Graph) -> None:
    report = verify_internal(
        k4, Partition.from_side_a(4, [0, 1]), DemandFunctions.constant(4, 2, 2)
    )
    assert not report.ok
    assert sorted(report.violations) == [
        Violation(0, "A", 2, 1),
        Violation(1, "A", 2, 1),
        Violation(2, "B", 2, 1),
        Violation(3, "B", 2, 1),
    ]


def test_trivial_partition_is_reported(c6: Graph) -> None:
    report = verify_internal(
        c6, Partition.from_side_a(6, range(6)), DemandFunctions.constant(6, 1, 1)
    )
    assert report.violations == (Violation(None, "B", 1, 0),)


def test_verification_checks_sizes(c6: Graph) -> None:
    with pytest.raises(GraphFormatError):
        verify_internal(
            c6, Partition.from_side_a(5, [0]), DemandFunctions.constant(6, 1, 1)
        )
    with pytest.raises(DemandMismatchError):
        verify_internal(
            c6, Partition.from_side_a(6, [0]), DemandFunctions.constant(5, 1, 1)
        )


def test_potential_on_c6(c6: Graph) -> None:
    # a(B) + b(A) - e(A, B) = 3 + 3 - 2
    assert (
        potential_w(
            c6, Partition.from_side_a(6, [0, 1, 2]), DemandFunctions.constant(6, 1, 1)
        )
        == 4
    )


@pytest.mark.parametrize("length", [8, 10])
def test_potential_checks_partition_size(c9_13: Graph, length: int) -> None:
    dem = DemandFunctions.constant(9, 2, 2)
    p = Partition.from_side_a(length, [0, 1, 2])
    with pytest.raises(GraphFormatError):
        potential_w(c9_13, p, dem)
    with pytest.raises(GraphFormatError):
        move_delta_w(c9_13, p, dem, 0)


def test_move_delta_matches_potential_difference() -> None:
    rng = np.random.default_rng(7)
    checked = 0
    for seed, (n, d) in enumerate([(10, 4), (16, 5), (20, 6), (24, 3), (14, 7)] * 4):
        g = random_regular(GenSpec(n=n, d=d, seed=seed, method="pairing"))
        dem = DemandFunctions.split(g)
        for _ in range(50):
            p = Partition.from_mask(rng.random(n) < 0.5)
            x = int(rng.integers(n))
            assert move_delta_w(g, p, dem, x) == potential_w(
                g, p.moved(x), dem
            ) - potential_w(g, p, dem)
            checked += 1
    assert checked == 1000


def test_move_delta_needs_exact_demands(petersen: Graph) -> None:
    with pytest.raises(DemandMismatchError):
        move_delta_w(
            petersen,
            Partition.from_side_a(10, range(5)),
            DemandFunctions.constant(10, 1, 1),
            0,
        )


def test_common_neighbors(diamond: Graph) -> None:
    assert common_neighbors(diamond, 1, 2) == (0, 3)
    assert common_neighbors(diamond, 0, 3) == (1, 2)


def test_four_sparsity_of_named_graphs(
    k4: Graph, diamond: Graph, c9_13: Graph, petersen: Graph, c6: Graph
) -> None:
    assert is_four_sparse(k4) == (False, frozenset(range(4)))
    assert is_four_sparse(diamond) == (False, frozenset(range(4)))
    assert is_four_sparse(c9_13) == (True, None)
    assert is_four_sparse(petersen).sparse
    assert is_four_sparse(c6).sparse


def test_trees_are_four_sparse(random_tree) -> None:
    for seed in range(20):
        assert is_four_sparse(random_tree(12, seed)).sparse


def test_witness_spans_five_edges() -> None:
    g = Graph.from_networkx(nx.gnp_random_graph(12, 0.6, seed=3))
    sparse, witness = is_four_sparse(g)
    assert not sparse
    assert witness is not None and len(witness) == 4
    assert g.induced_edge_count(witness) >= 5


def test_demand_constructors(petersen: Graph) -> None:
    assert DemandFunctions.internal(petersen) == DemandFunctions.constant(10, 2, 2)
    assert DemandFunctions.split(petersen) == DemandFunctions.constant(10, 2, 1)
    with pytest.raises(DemandMismatchError):
        DemandFunctions(a=(1, 2), b=(1,))
    with pytest.raises(DemandMismatchError):
        DemandFunctions(a=(-1,), b=(1,))


def test_exact_demands(petersen: Graph, c9_13: Graph) -> None:
    require_exact_demands(c9_13, DemandFunctions.constant(9, 2, 2))
    require_exact_demands(petersen, DemandFunctions.split(petersen), minimum=1)
    with pytest.raises(DemandMismatchError):
        require_exact_demands(petersen, DemandFunctions.split(petersen))
    with pytest.raises(DemandMismatchError):
        require_exact_demands(c9_13, DemandFunctions.constant(9, 3, 2))
