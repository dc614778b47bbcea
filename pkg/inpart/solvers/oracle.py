"""Exhaustive ground truth for small graphs.

Subsets are integer bitmasks enumerated in ascending order.
Chunks of consecutive masks are evaluated at once with numpy
(membership matrix times adjacency matrix) on a thread pool,
and results are merged in mask order, so "the first one found" never depends
on scheduling.
"""

import logging
from collections.abc import Callable, Collection
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np
from jaxtyping import Bool, Float

from inpart.graph.core import DemandFunctions, Graph, Partition, verify_internal
from inpart.solvers.config import OracleLimits
from inpart.solvers.degeneracy import Thresholds, is_internal, thresholds_for

__all__ = [
    "OracleSizeError",
    "brute_force_partition",
    "brute_force_degenerate",
    "brute_force_internal_union",
    "brute_force_is_minimal_internal",
    "brute_force_four_sparse",
]

logger = logging.getLogger("inpart")

_CHUNK_SIZE = 1 << 15


class OracleSizeError(ValueError):
    """Raised when an instance is too large for exhaustive enumeration"""


def _membership(start: int, stop: int, width: int) -> Bool[np.ndarray, "masks width"]:
    masks = np.arange(start, stop, dtype=np.int64)
    bits = np.arange(width, dtype=np.int64)
    return ((masks[:, None] >> bits[None, :]) & 1).astype(bool)


def _internal_degrees(
    members: Bool[np.ndarray, "masks width"], adjacency: Float[np.ndarray, "width width"]
) -> Float[np.ndarray, "masks width"]:
    # entries are small integers, so float32 products are exact
    return members.astype(np.float32) @ adjacency


def _chunks(count: int) -> list[tuple[int, int]]:
    return [
        (start, min(start + _CHUNK_SIZE, count)) for start in range(0, count, _CHUNK_SIZE)
    ]


def _first_hit(
    count: int,
    evaluate: Callable[[int, int], int | None],
    max_workers: int,
) -> int | None:
    """The smallest mask in [0, count) for which `evaluate` reports a hit.

    Chunks are submitted in waves of `max_workers`; a wave's results are
    inspected in mask order before the next wave starts.
    """
    chunks = _chunks(count)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        for wave_start in range(0, len(chunks), max_workers):
            wave = chunks[wave_start : wave_start + max_workers]
            futures = [executor.submit(evaluate, start, stop) for start, stop in wave]
            for future in futures:
                if (hit := future.result()) is not None:
                    for pending in futures:
                        pending.cancel()
                    return hit
    return None


def _check_size(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise OracleSizeError(f"{what} has {size} vertices, the limit is {limit}")


def brute_force_partition(
    g: Graph, dem: DemandFunctions, limits: OracleLimits | None = None
) -> Partition | None:
    """The first (a,b)-internal partition in canonical order, if there is one.

    Vertex 0 always lies in A; bit j of a mask puts vertex j+1 into A.
    The all-ones mask (empty B) is skipped, leaving 2^(n-1) - 1 splits.
    """
    limits = limits or OracleLimits()
    _check_size(g.n, limits.max_n_partition, "graph")
    dem.check_lengths(g)
    if g.n < 2:
        return None

    adjacency = g.dense.astype(np.float32)
    degrees = g.degrees.astype(np.float32)
    a, b = dem.a_array, dem.b_array

    def evaluate(start: int, stop: int) -> int | None:
        members = np.ones((stop - start, g.n), dtype=bool)
        members[:, 1:] = _membership(start, stop, g.n - 1)
        towards_a = _internal_degrees(members, adjacency)
        own = np.where(members, towards_a, degrees - towards_a)
        required = np.where(members, a, b)
        hits = np.flatnonzero(np.all(own >= required, axis=1))
        return start + int(hits[0]) if hits.size else None

    hit = _first_hit((1 << (g.n - 1)) - 1, evaluate, limits.max_workers)
    if hit is None:
        return None
    partition = Partition.from_side_a(
        g.n, [0, *(j + 1 for j in range(g.n - 1) if hit >> j & 1)]
    )
    assert verify_internal(g, partition, dem).ok
    return partition


def _subset_arrays(
    g: Graph, subset: Collection[int], f: Thresholds
) -> tuple[list[int], Float[np.ndarray, "s s"], Float[np.ndarray, "s"]]:
    members = sorted(set(subset))
    for x in members:
        g.check_vertex(x)
    threshold = thresholds_for(g, f)
    adjacency = g.dense[np.ix_(members, members)].astype(np.float32)
    return members, adjacency, np.array([threshold[x] for x in members], dtype=np.float32)


def brute_force_degenerate(
    g: Graph, subset: Collection[int], f: Thresholds, limits: OracleLimits | None = None
) -> bool:
    """Whether every non-empty K within `subset` has a vertex with d_K(x) <= f(x)."""
    limits = limits or OracleLimits()
    members, adjacency, threshold = _subset_arrays(g, subset, f)
    _check_size(len(members), limits.max_set_degeneracy, "subset")

    def evaluate(start: int, stop: int) -> int | None:
        # masks are offset by one to skip the empty set
        chosen = _membership(start + 1, stop + 1, len(members))
        degree = _internal_degrees(chosen, adjacency)
        has_low = np.any(chosen & (degree <= threshold), axis=1)
        counterexamples = np.flatnonzero(~has_low)
        return start + 1 + int(counterexamples[0]) if counterexamples.size else None

    return _first_hit((1 << len(members)) - 1, evaluate, limits.max_workers) is None


def brute_force_internal_union(
    g: Graph, subset: Collection[int], f: Thresholds, limits: OracleLimits | None = None
) -> frozenset[int]:
    """The union of all non-empty f-internal K within `subset`."""
    limits = limits or OracleLimits()
    members, adjacency, threshold = _subset_arrays(g, subset, f)
    _check_size(len(members), limits.max_set_degeneracy, "subset")

    def evaluate(start: int, stop: int) -> Bool[np.ndarray, "s"]:
        chosen = _membership(start + 1, stop + 1, len(members))
        degree = _internal_degrees(chosen, adjacency)
        internal = np.all(~chosen | (degree >= threshold), axis=1)
        return np.any(chosen[internal], axis=0)

    covered = np.zeros(len(members), dtype=bool)
    with ThreadPoolExecutor(max_workers=limits.max_workers) as executor:
        for part in executor.map(
            lambda chunk: evaluate(*chunk), _chunks((1 << len(members)) - 1)
        ):
            covered |= part
    return frozenset(x for x, hit in zip(members, covered) if hit)


def brute_force_is_minimal_internal(
    g: Graph, subset: Collection[int], f: Thresholds, limits: OracleLimits | None = None
) -> bool:
    """Whether `subset` is f-internal while none of its proper non-empty subsets are."""
    limits = limits or OracleLimits()
    members, adjacency, threshold = _subset_arrays(g, subset, f)
    _check_size(len(members), limits.max_set_degeneracy, "subset")
    if not members or not is_internal(g, members, f):
        return False

    def evaluate(start: int, stop: int) -> int | None:
        chosen = _membership(start + 1, stop + 1, len(members))
        degree = _internal_degrees(chosen, adjacency)
        internal = np.flatnonzero(np.all(~chosen | (degree >= threshold), axis=1))
        return start + 1 + int(internal[0]) if internal.size else None

    # all masks except the empty and the full one
    proper = (1 << len(members)) - 2
    return _first_hit(proper, evaluate, limits.max_workers) is None


def brute_force_four_sparse(g: Graph, limits: OracleLimits | None = None) -> bool:
    """Checks every 4-set of vertices for five or more edges."""
    limits = limits or OracleLimits()
    _check_size(g.n, limits.max_n_four_sparse, "graph")
    nbrs = g.neighbor_sets
    for quad in combinations(range(g.n), 4):
        edges = sum(1 for u, v in combinations(quad, 2) if v in nbrs[u])
        if edges >= 5:
            logger.debug(f"vertices {quad} span {edges} edges")
            return False
    return True
