"""Graphs, two-sided vertex partitions, demands and the quantities defined on them.

Every solver in this package returns a `Partition`;
`verify_internal` is the single certificate all of them are checked against.
"""

import logging
from collections.abc import Collection, Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import chain
from typing import Literal, NamedTuple

import networkx as nx
import numpy as np
from jaxtyping import Bool, Int

__all__ = [
    "Graph",
    "Partition",
    "DemandFunctions",
    "Violation",
    "VerificationReport",
    "SparsityCheck",
    "degree_in_subset",
    "same_side_degrees",
    "cut_size",
    "verify_internal",
    "potential_w",
    "move_delta_w",
    "common_neighbors",
    "is_four_sparse",
    "require_exact_demands",
]

logger = logging.getLogger("inpart")

Side = Literal["A", "B"]


class GraphFormatError(ValueError):
    """Raised when a graph, partition or demand description is malformed"""


class VertexRangeError(IndexError):
    """Raised when a vertex id lies outside of 0..n-1"""


class DemandMismatchError(ValueError):
    """Raised when demands do not fit the graph they are used with"""


@dataclass(frozen=True)
class Graph:
    """An immutable simple undirected graph on the vertices 0..n-1."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    """Strictly increasing neighbor ids of every vertex"""

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise GraphFormatError(
                f"expected adjacency for {self.n} vertices, got {len(self.adjacency)}"
            )
        for v, nbrs in enumerate(self.adjacency):
            if any(u >= w for u, w in zip(nbrs, nbrs[1:])):
                raise GraphFormatError(f"neighbors of {v} are not strictly increasing")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphFormatError(f"neighbor {u} of {v} is out of range")
                if u == v:
                    raise GraphFormatError(f"self-loop at vertex {v}")
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v not in self.neighbor_sets[u]:
                    raise GraphFormatError(f"edge ({v}, {u}) is only stored one way")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Builds a graph, rejecting self-loops, duplicate edges and bad ids."""
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        neighbors: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) leaves the range 0..{n - 1}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if v in neighbors[u]:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(n=n, adjacency=tuple(tuple(sorted(nbrs)) for nbrs in neighbors))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        relabeled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls.from_edges(relabeled.number_of_nodes(), relabeled.edges())

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @cached_property
    def m(self) -> int:
        return sum(map(len, self.adjacency)) // 2

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def degrees(self) -> Int[np.ndarray, "n"]:
        degrees = np.fromiter(map(len, self.adjacency), dtype=np.int64, count=self.n)
        degrees.setflags(write=False)
        return degrees

    # CSR view: for directed edge i, `sources[i]` -> `indices[i]`
    @cached_property
    def indices(self) -> Int[np.ndarray, "two_m"]:
        indices = np.fromiter(
            chain.from_iterable(self.adjacency), dtype=np.int64, count=2 * self.m
        )
        indices.setflags(write=False)
        return indices

    @cached_property
    def sources(self) -> Int[np.ndarray, "two_m"]:
        sources = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        sources.setflags(write=False)
        return sources

    @cached_property
    def dense(self) -> Int[np.ndarray, "n n"]:
        dense = np.zeros((self.n, self.n), dtype=np.int8)
        dense[self.sources, self.indices] = 1
        dense.setflags(write=False)
        return dense

    def degree(self, x: int) -> int:
        self.check_vertex(x)
        return len(self.adjacency[x])

    def check_vertex(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise VertexRangeError(f"vertex {x} is not in 0..{self.n - 1}")

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yields every edge once as (u, v) with u < v, in ascending order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    def induced_edge_count(self, subset: Collection[int]) -> int:
        members = _as_set(subset)
        return sum(len(self.neighbor_sets[x] & members) for x in members) // 2


@dataclass(frozen=True)
class Partition:
    """A total assignment of every vertex to side A or side B.

    One side may be empty; verifiers report such trivial partitions.
    """

    in_a: tuple[bool, ...]

    @classmethod
    def from_side_a(cls, n: int, side_a: Iterable[int]) -> "Partition":
        in_a = [False] * n
        for x in side_a:
            if not 0 <= x < n:
                raise VertexRangeError(f"vertex {x} is not in 0..{n - 1}")
            in_a[x] = True
        return cls(tuple(in_a))

    @classmethod
    def from_mask(cls, mask: Bool[np.ndarray, "n"]) -> "Partition":
        return cls(tuple(bool(v) for v in mask))

    @property
    def n(self) -> int:
        return len(self.in_a)

    @cached_property
    def side_a(self) -> frozenset[int]:
        return frozenset(x for x, in_a in enumerate(self.in_a) if in_a)

    @cached_property
    def side_b(self) -> frozenset[int]:
        return frozenset(x for x, in_a in enumerate(self.in_a) if not in_a)

    @cached_property
    def mask(self) -> Bool[np.ndarray, "n"]:
        mask = np.array(self.in_a, dtype=bool)
        mask.setflags(write=False)
        return mask

    def side_of(self, x: int) -> Side:
        return "A" if self.in_a[x] else "B"

    def moved(self, x: int) -> "Partition":
        """The partition with vertex `x` switched to the other side."""
        in_a = list(self.in_a)
        in_a[x] = not in_a[x]
        return Partition(tuple(in_a))


@dataclass(frozen=True)
class DemandFunctions:
    """Per-vertex demands: x in A needs a(x) neighbors in A, x in B needs b(x) in B."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if len(self.a) != len(self.b):
            raise DemandMismatchError(
                f"a has {len(self.a)} entries but b has {len(self.b)}"
            )
        if any(v < 0 for v in chain(self.a, self.b)):
            raise DemandMismatchError("demands must be non-negative")

    @classmethod
    def constant(cls, n: int, a: int, b: int) -> "DemandFunctions":
        return cls(a=(a,) * n, b=(b,) * n)

    @classmethod
    def internal(cls, g: Graph) -> "DemandFunctions":
        """a = b = ceil(d(x)/2): at least half of every vertex's neighbors on its side"""
        half_up = tuple((len(nbrs) + 1) // 2 for nbrs in g.adjacency)
        return cls(a=half_up, b=half_up)

    @classmethod
    def split(cls, g: Graph) -> "DemandFunctions":
        """a = ceil(d(x)/2), b = floor(d(x)/2), so that a(x) + b(x) = d(x)"""
        return cls(
            a=tuple((len(nbrs) + 1) // 2 for nbrs in g.adjacency),
            b=tuple(len(nbrs) // 2 for nbrs in g.adjacency),
        )

    @property
    def n(self) -> int:
        return len(self.a)

    @cached_property
    def a_array(self) -> Int[np.ndarray, "n"]:
        return np.array(self.a, dtype=np.int64)

    @cached_property
    def b_array(self) -> Int[np.ndarray, "n"]:
        return np.array(self.b, dtype=np.int64)

    def check_lengths(self, g: Graph) -> None:
        if self.n != g.n:
            raise DemandMismatchError(
                f"demands cover {self.n} vertices, but the graph has {g.n}"
            )

    def for_side(self, x: int, side: Side) -> int:
        return self.a[x] if side == "A" else self.b[x]


class Violation(NamedTuple):
    """A vertex short of its demand.

    A trivial partition is reported with `vertex=None`, `side` naming the empty side,
    `required=1` and `actual=0` (the side's size).
    """

    vertex: int | None
    side: Side
    required: int
    actual: int


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


class SparsityCheck(NamedTuple):
    sparse: bool
    witness: frozenset[int] | None
    """Four vertices spanning at least five edges, if the graph is not 4-sparse"""


def _as_set(subset: Collection[int]) -> frozenset[int] | set[int]:
    return subset if isinstance(subset, (set, frozenset)) else frozenset(subset)


def _check_partition(g: Graph, p: Partition) -> None:
    if p.n != g.n:
        raise GraphFormatError(
            f"partition covers {p.n} vertices, but the graph has {g.n}"
        )


def degree_in_subset(g: Graph, x: int, subset: Collection[int]) -> int:
    """d_S(x) = |N(x) ∩ S|"""
    g.check_vertex(x)
    return len(g.neighbor_sets[x] & _as_set(subset))


def same_side_degrees(g: Graph, p: Partition) -> Int[np.ndarray, "n"]:
    """Number of neighbors every vertex has on its own side."""
    _check_partition(g, p)
    mask = p.mask
    same = mask[g.sources] == mask[g.indices]
    return np.bincount(g.sources, weights=same, minlength=g.n).astype(np.int64)


def cut_size(g: Graph, p: Partition) -> int:
    """e(A, B), the number of edges between the two sides"""
    _check_partition(g, p)
    mask = p.mask
    return int(np.count_nonzero(mask[g.sources] != mask[g.indices])) // 2


def verify_internal(g: Graph, p: Partition, dem: DemandFunctions) -> VerificationReport:
    """Checks that `p` is a non-trivial (a, b)-internal partition.

    Never raises for a failed check; every shortfall is listed in the report.
    """
    dem.check_lengths(g)
    own = same_side_degrees(g, p)
    mask = p.mask
    required = np.where(mask, dem.a_array, dem.b_array)

    violations: list[Violation] = []
    if not p.side_a:
        violations.append(Violation(vertex=None, side="A", required=1, actual=0))
    if not p.side_b:
        violations.append(Violation(vertex=None, side="B", required=1, actual=0))
    violations.extend(
        Violation(
            vertex=int(x),
            side="A" if mask[x] else "B",
            required=int(required[x]),
            actual=int(own[x]),
        )
        for x in np.flatnonzero(own < required)
    )
    return VerificationReport(tuple(violations))


def potential_w(g: Graph, p: Partition, dem: DemandFunctions) -> int:
    """w(A, B) = a(B) + b(A) - e(A, B)"""
    _check_partition(g, p)
    dem.check_lengths(g)
    mask = p.mask
    return (
        int(dem.a_array[~mask].sum()) + int(dem.b_array[mask].sum()) - cut_size(g, p)
    )


def move_delta_w(g: Graph, p: Partition, dem: DemandFunctions, x: int) -> int:
    """The change of `potential_w` when `x` switches sides.

    The closed form 2(b(x) - d_B(x)) for x in B, 2(a(x) - d_A(x)) for x in A
    only holds where d(x) = a(x) + b(x).
    """
    _check_partition(g, p)
    g.check_vertex(x)
    dem.check_lengths(g)
    if g.degree(x) != dem.a[x] + dem.b[x]:
        raise DemandMismatchError(
            f"d({x}) = {g.degree(x)} differs from a({x}) + b({x}) = {dem.a[x] + dem.b[x]}"
        )
    if p.in_a[x]:
        return 2 * (dem.a[x] - degree_in_subset(g, x, p.side_a))
    else:
        return 2 * (dem.b[x] - degree_in_subset(g, x, p.side_b))


def common_neighbors(g: Graph, u: int, v: int) -> tuple[int, ...]:
    g.check_vertex(u)
    g.check_vertex(v)
    return tuple(sorted(g.neighbor_sets[u] & g.neighbor_sets[v]))


def is_four_sparse(g: Graph) -> SparsityCheck:
    """Whether every four vertices span at most four edges.

    A 4-set with five or more edges contains a diamond, and a diamond is an edge
    whose endpoints share two neighbors; so scanning the edges suffices.
    """
    for u, v in g.edges():
        common = common_neighbors(g, u, v)
        if len(common) >= 2:
            return SparsityCheck(False, frozenset((u, v, *common[:2])))
    return SparsityCheck(True, None)


def require_exact_demands(g: Graph, dem: DemandFunctions, *, minimum: int = 2) -> None:
    """Raises unless d(x) = a(x) + b(x) and a(x), b(x) >= `minimum` for every x."""
    dem.check_lengths(g)
    for x, (a, b) in enumerate(zip(dem.a, dem.b)):
        if a < minimum or b < minimum:
            raise DemandMismatchError(
                f"demands of vertex {x} are ({a}, {b}), both need to be at least {minimum}"
            )
        if g.degree(x) != a + b:
            raise DemandMismatchError(
                f"d({x}) = {g.degree(x)} differs from a({x}) + b({x}) = {a + b}"
            )
