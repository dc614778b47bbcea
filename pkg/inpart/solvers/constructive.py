"""Constructive search for (a,b)-internal partitions of 4-sparse graphs.

Requires d(x) = a(x) + b(x) and a(x), b(x) >= 2 for every vertex.
The search keeps a set A that is a-degenerate but not (a-1)-degenerate and,
while V minus A is still (b-1)-degenerate, either absorbs a vertex of

    D = {x in B : d_B(x) <= b(x) - 1}

into A, or sheds two adjacent vertices of

    C = {y in A : d_A(y) = a(y)}

that share a neighbor in D.  Every step strictly increases (w, -|A|)
lexicographically, where w = a(B) + b(A) - e(A, B).
Before absorbing or shedding, A releases its vertices below demand (raising w)
and the vertices of C it can lose while keeping an a-internal subset (keeping w).
Once V minus A holds a b-internal subset, the a-internal core of A and the
b-internal core of V minus A are grown into a partition.
"""

import heapq
import logging
from dataclasses import asdict, dataclass
from typing import Any, Literal

from inpart.graph.core import (
    DemandFunctions,
    Graph,
    Partition,
    is_four_sparse,
    move_delta_w,
    potential_w,
    require_exact_demands,
    verify_internal,
)
from inpart.solvers.degeneracy import (
    is_degenerate,
    is_internal,
    maximal_internal_subset,
    minimal_internal_subset,
    thresholds_for,
)

__all__ = [
    "Absorb",
    "ShedPair",
    "Release",
    "Step",
    "SearchState",
    "ConstructiveResult",
    "low_degree_sets",
    "initialize",
    "loop_guard",
    "loop_step",
    "release_step",
    "extend_internal_pair",
    "run_constructive",
    "find_internal_partition_4sparse",
    "step_record",
]

logger = logging.getLogger("inpart")


@dataclass(frozen=True)
class Absorb:
    x: int
    delta_w: int
    w: int
    """Potential after the step"""
    size: int
    """|A| after the step"""
    kind: Literal["absorb"] = "absorb"


@dataclass(frozen=True)
class ShedPair:
    y: int
    z: int
    x: int
    """The common neighbor of y and z in D"""
    delta_w: int
    w: int
    size: int
    extra_c_neighbours: bool
    """Whether y or z had a neighbor in C besides each other"""
    kind: Literal["shed_pair"] = "shed_pair"


@dataclass(frozen=True)
class Release:
    y: int
    delta_w: int
    w: int
    size: int
    below_demand: bool
    """Whether d_A(y) < a(y); otherwise y was in C"""
    kind: Literal["release"] = "release"


Step = Absorb | ShedPair | Release


@dataclass(frozen=True)
class SearchState:
    side_a: frozenset[int]
    w: int
    trace: tuple[Step, ...] = ()

    @property
    def size(self) -> int:
        return len(self.side_a)


@dataclass(frozen=True)
class ConstructiveResult:
    partition: Partition
    state: SearchState
    """The search state the loop ended in"""


class NotFourSparseError(ValueError):
    """Raised when the input spans five or more edges on some four vertices"""

    def __init__(self, message: str, witness: frozenset[int]) -> None:
        super().__init__(message, witness)
        self.message = message
        self.witness = witness

    def __str__(self) -> str:
        return self.message


class PreconditionError(ValueError):
    """Raised when a pair of sets cannot be extended to an internal partition"""


class DichotomyFailure(RuntimeError):
    """Raised when neither an absorbable vertex nor a sheddable triangle exists"""

    def __init__(
        self,
        message: str,
        state: SearchState,
        c: frozenset[int],
        d: frozenset[int],
    ) -> None:
        super().__init__(message, state, c, d)
        self.message = message
        self.state = state
        self.c = c
        self.d = d

    def __str__(self) -> str:
        return (
            f"{self.message} (|A| = {self.state.size}, w = {self.state.w}, "
            f"C = {sorted(self.c)}, D = {sorted(self.d)}, "
            f"after {len(self.state.trace)} steps)"
        )


class SearchInvariantError(RuntimeError):
    """Raised when a search step breaks one of the loop's invariants"""

    def __init__(self, message: str, state: SearchState) -> None:
        super().__init__(message, state)
        self.message = message
        self.state = state

    def __str__(self) -> str:
        return f"{self.message} (|A| = {self.state.size}, w = {self.state.w})"


def low_degree_sets(
    g: Graph, side_a: frozenset[int], dem: DemandFunctions
) -> tuple[frozenset[int], frozenset[int]]:
    """C: vertices of A exactly at demand; D: vertices of B below demand."""
    if not side_a or len(side_a) >= g.n:
        raise PreconditionError("A needs to be a non-empty proper subset of V")
    side_b = frozenset(range(g.n)) - side_a
    c = frozenset(y for y in side_a if len(g.neighbor_sets[y] & side_a) == dem.a[y])
    d = frozenset(x for x in side_b if len(g.neighbor_sets[x] & side_b) <= dem.b[x] - 1)
    return c, d


def _state_at(g: Graph, side_a: frozenset[int], dem: DemandFunctions) -> SearchState:
    return SearchState(
        side_a=side_a, w=potential_w(g, Partition.from_side_a(g.n, side_a), dem)
    )


def initialize(g: Graph, dem: DemandFunctions) -> SearchState:
    """Starts from an inclusion-minimal a-internal set.

    Such a set is a-degenerate and not (a-1)-degenerate.
    Vertices with d_A(x) < a(x) are stripped, which leaves an a-internal set as it is.
    """
    require_exact_demands(g, dem)
    minimal = minimal_internal_subset(g, dem.a)
    side_a = maximal_internal_subset(g, minimal, dem.a)
    if stripped := len(minimal) - len(side_a):
        logger.warning(f"stripped {stripped} vertices below demand from the initial A")
    state = _state_at(g, side_a, dem)
    if not 2 <= state.size <= g.n - 2:
        raise SearchInvariantError(f"initial |A| = {state.size} outside of 2..n-2", state)
    logger.debug(f"initial A has {state.size} vertices, w = {state.w}")
    return state


def loop_guard(g: Graph, state: SearchState, dem: DemandFunctions) -> bool:
    """Whether V minus A is still (b-1)-degenerate."""
    side_b = frozenset(range(g.n)) - state.side_a
    return is_degenerate(g, side_b, thresholds_for(g, dem.b, shift=-1))


def loop_step(
    g: Graph, state: SearchState, dem: DemandFunctions
) -> tuple[SearchState, Step]:
    c, d = low_degree_sets(g, state.side_a, dem)
    if not d:
        raise DichotomyFailure("D is empty", state, c, d)

    for x in sorted(d):
        grown = state.side_a | {x}
        if is_degenerate(g, grown, dem.a):
            delta = move_delta_w(g, Partition.from_side_a(g.n, state.side_a), dem, x)
            step: Step = Absorb(x=x, delta_w=delta, w=state.w + delta, size=len(grown))
            return SearchState(grown, step.w, (*state.trace, step)), step

    for x in sorted(d):
        candidates = sorted(c & g.neighbor_sets[x])
        for i, y in enumerate(candidates):
            for z in candidates[i + 1 :]:
                if z not in g.neighbor_sets[y]:
                    continue
                shrunk = state.side_a - {y, z}
                w = potential_w(g, Partition.from_side_a(g.n, shrunk), dem)
                extra = bool(
                    (g.neighbor_sets[y] & c) - {z} or (g.neighbor_sets[z] & c) - {y}
                )
                if extra:
                    logger.warning(
                        f"shed pair ({y}, {z}) has a further neighbor in C "
                        f"(|A| = {state.size}, w = {state.w})"
                    )
                step = ShedPair(
                    y=y,
                    z=z,
                    x=x,
                    delta_w=w - state.w,
                    w=w,
                    size=len(shrunk),
                    extra_c_neighbours=extra,
                )
                return SearchState(shrunk, w, (*state.trace, step)), step

    raise DichotomyFailure(
        "no vertex of D can be absorbed and no triangle joins D to two vertices of C",
        state,
        c,
        d,
    )


def release_step(
    g: Graph, state: SearchState, dem: DemandFunctions
) -> tuple[SearchState, Release] | None:
    """Moves one vertex of A to B if A is not yet settled, else returns None.

    A vertex with d_A(y) < a(y) goes first, raising w by 2(a(y) - d_A(y)).
    Otherwise a vertex y of C goes if A minus y still holds an a-internal subset;
    w stays the same and A shrinks.
    A settled A has neither kind of vertex.
    """
    side_a = state.side_a
    below = [y for y in sorted(side_a) if len(g.neighbor_sets[y] & side_a) < dem.a[y]]
    if below:
        y = below[0]
    else:
        c, _ = low_degree_sets(g, side_a, dem)
        y = next(
            (y for y in sorted(c) if maximal_internal_subset(g, side_a - {y}, dem.a)),
            None,
        )
        if y is None:
            return None

    delta = move_delta_w(g, Partition.from_side_a(g.n, side_a), dem, y)
    shrunk = side_a - {y}
    step = Release(
        y=y, delta_w=delta, w=state.w + delta, size=len(shrunk), below_demand=bool(below)
    )
    return SearchState(shrunk, step.w, (*state.trace, step)), step


def _check_step(
    g: Graph, before: SearchState, after: SearchState, dem: DemandFunctions
) -> None:
    if (after.w, -after.size) <= (before.w, -before.size):
        raise SearchInvariantError(
            f"(w, -|A|) went from ({before.w}, {-before.size}) "
            f"to ({after.w}, {-after.size})",
            after,
        )
    if after.w != potential_w(g, Partition.from_side_a(g.n, after.side_a), dem):
        raise SearchInvariantError("tracked potential differs from w(A, B)", after)
    if not 2 <= after.size <= g.n - 2:
        raise SearchInvariantError(f"|A| = {after.size} outside of 2..n-2", after)
    if not is_degenerate(g, after.side_a, dem.a):
        raise SearchInvariantError("A is not a-degenerate", after)
    if is_degenerate(g, after.side_a, thresholds_for(g, dem.a, shift=-1)):
        raise SearchInvariantError("A became (a-1)-degenerate", after)


def extend_internal_pair(
    g: Graph,
    a_star: frozenset[int],
    b_star: frozenset[int],
    dem: DemandFunctions,
) -> Partition:
    """Grows an (a,b)-internal pair of disjoint sets into an (a,b)-internal partition.

    Unassigned vertices with d_A(x) >= a(x) join A until none is left;
    everything else joins B, where each of them then has at least b(x) + 1 neighbors.
    """
    dem.check_lengths(g)
    if not a_star or not b_star or a_star & b_star:
        raise PreconditionError("A* and B* need to be disjoint and non-empty")
    if not is_internal(g, a_star, dem.a):
        raise PreconditionError("A* is not a-internal")
    if not is_internal(g, b_star, dem.b):
        raise PreconditionError("B* is not b-internal")
    if any(g.degree(x) < dem.a[x] + dem.b[x] for x in range(g.n)):
        raise PreconditionError("some vertex has d(x) < a(x) + b(x)")

    side_a = set(a_star)
    unassigned = set(range(g.n)) - a_star - b_star
    towards_a = {x: len(g.neighbor_sets[x] & a_star) for x in unassigned}
    joining = [x for x in unassigned if towards_a[x] >= dem.a[x]]
    heapq.heapify(joining)
    while joining:
        x = heapq.heappop(joining)
        unassigned.remove(x)
        side_a.add(x)
        for u in g.adjacency[x]:
            if u in unassigned:
                towards_a[u] += 1
                if towards_a[u] == dem.a[u]:
                    heapq.heappush(joining, u)

    partition = Partition.from_side_a(g.n, side_a)
    report = verify_internal(g, partition, dem)
    assert report.ok, f"extended partition is not internal: {report.violations[:5]}"
    return partition


def run_constructive(
    g: Graph, dem: DemandFunctions, *, force: bool = False
) -> ConstructiveResult:
    """Runs the search and returns the partition together with the step trace.

    With `force`, graphs that are not 4-sparse are attempted anyway;
    the search then either succeeds or raises `DichotomyFailure` or
    `SearchInvariantError`.
    """
    require_exact_demands(g, dem)
    sparse, witness = is_four_sparse(g)
    if not sparse:
        assert witness is not None
        if not force:
            raise NotFourSparseError(
                f"vertices {sorted(witness)} span at least five edges", witness
            )
        logger.warning(f"attempting a graph that is not 4-sparse (witness {sorted(witness)})")

    state = initialize(g, dem)
    while loop_guard(g, state, dem):
        released = release_step(g, state, dem)
        new_state, step = released if released else loop_step(g, state, dem)
        _check_step(g, state, new_state, dem)
        logger.debug(f"step {len(new_state.trace)}: {step}")
        state = new_state

    side_b = frozenset(range(g.n)) - state.side_a
    a_star = maximal_internal_subset(g, state.side_a, dem.a)
    b_star = maximal_internal_subset(g, side_b, dem.b)
    partition = extend_internal_pair(g, a_star, b_star, dem)
    logger.debug(
        f"found partition with |A| = {len(partition.side_a)} "
        f"after {len(state.trace)} steps"
    )
    return ConstructiveResult(partition=partition, state=state)


def find_internal_partition_4sparse(
    g: Graph, dem: DemandFunctions, *, force: bool = False
) -> Partition:
    return run_constructive(g, dem, force=force).partition


def step_record(step: Step) -> dict[str, Any]:
    """A JSON-serializable description of a step."""
    return asdict(step)
