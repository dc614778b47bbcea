"""Peeling with per-vertex thresholds.

A set K is f-internal if d_K(x) >= f(x) for every x in K.
A set S is f-degenerate if every non-empty K ⊆ S has a vertex with d_K(x) <= f(x);
equivalently, repeatedly deleting such vertices dismantles S completely.
"""

import heapq
import logging
from collections.abc import Collection, Sequence
from dataclasses import dataclass

import numpy as np

from inpart.graph.core import DemandMismatchError, Graph

__all__ = [
    "PeelResult",
    "Thresholds",
    "peel_core",
    "is_degenerate",
    "is_internal",
    "maximal_internal_subset",
    "minimal_internal_subset",
]

logger = logging.getLogger("inpart")

Thresholds = int | Sequence[int] | np.ndarray
"""A constant threshold or one value per vertex"""


class NoInternalSubsetError(ValueError):
    """Raised when no non-empty f-internal subset exists"""


@dataclass(frozen=True)
class PeelResult:
    core: frozenset[int]
    """The unique maximal (f+1)-internal subset of the peeled set"""
    order: tuple[tuple[int, int], ...]
    """(vertex, internal degree when it was removed), in removal order"""


def thresholds_for(g: Graph, f: Thresholds, *, shift: int = 0) -> list[int]:
    if isinstance(f, (int, np.integer)):
        return [int(f) + shift] * g.n
    values = [int(v) + shift for v in f]
    if len(values) != g.n:
        raise DemandMismatchError(
            f"thresholds cover {len(values)} vertices, but the graph has {g.n}"
        )
    return values


def _members(g: Graph, subset: Collection[int]) -> set[int]:
    members = set(subset)
    for x in members:
        g.check_vertex(x)
    return members


def peel_core(
    g: Graph,
    subset: Collection[int],
    f: Thresholds,
    *,
    priority: Sequence[int] | None = None,
) -> PeelResult:
    """Repeatedly removes a vertex x of the remaining set K with d_K(x) <= f(x).

    Among the currently removable vertices, the one with the smallest `priority`
    (by default: the smallest id) goes first.  The core does not depend on the order.
    """
    threshold = thresholds_for(g, f)
    members = _members(g, subset)
    degree = {x: len(g.neighbor_sets[x] & members) for x in members}
    key = (lambda x: x) if priority is None else (lambda x: priority[x])

    removable = [(key(x), x) for x in members if degree[x] <= threshold[x]]
    heapq.heapify(removable)
    order: list[tuple[int, int]] = []
    while removable:
        _, x = heapq.heappop(removable)
        members.remove(x)
        order.append((x, degree[x]))
        for u in g.adjacency[x]:
            if u in members:
                degree[u] -= 1
                # each vertex becomes removable exactly once
                if degree[u] == threshold[u]:
                    heapq.heappush(removable, (key(u), u))

    return PeelResult(core=frozenset(members), order=tuple(order))


def is_degenerate(g: Graph, subset: Collection[int], f: Thresholds) -> bool:
    return not peel_core(g, subset, f).core


def is_internal(g: Graph, subset: Collection[int], f: Thresholds) -> bool:
    threshold = thresholds_for(g, f)
    members = _members(g, subset)
    return all(len(g.neighbor_sets[x] & members) >= threshold[x] for x in members)


def maximal_internal_subset(
    g: Graph, subset: Collection[int], f: Thresholds
) -> frozenset[int]:
    """The unique maximal f-internal subset; empty iff `subset` is (f-1)-degenerate."""
    return peel_core(g, subset, thresholds_for(g, f, shift=-1)).core


def _without(
    g: Graph,
    members: set[int],
    degree: dict[int, int],
    threshold: list[int],
    x: int,
) -> tuple[set[int], dict[int, int]] | None:
    """Largest f-internal subset of an f-internal set minus `x`, or None if empty."""
    members = set(members)
    degree = dict(degree)
    members.remove(x)
    stack = [x]
    while stack:
        y = stack.pop()
        for u in g.adjacency[y]:
            if u in members:
                degree[u] -= 1
                if degree[u] == threshold[u] - 1:
                    members.remove(u)
                    stack.append(u)
    return (members, degree) if members else None


def minimal_internal_subset(g: Graph, f: Thresholds) -> frozenset[int]:
    """An inclusion-minimal non-empty f-internal set.

    Starts from the maximal f-internal subset of V and, scanning vertices by id,
    replaces the current set A with the maximal f-internal subset of A minus x
    whenever that is non-empty.  If deleting x leaves nothing f-internal,
    the same holds for every subset of A, so a single pass suffices.
    """
    threshold = thresholds_for(g, f)
    current = set(maximal_internal_subset(g, range(g.n), threshold))
    if not current:
        raise NoInternalSubsetError("the graph has no non-empty f-internal subset")
    degree = {x: len(g.neighbor_sets[x] & current) for x in current}

    for x in sorted(current):
        if x not in current:
            continue
        if (shrunk := _without(g, current, degree, threshold, x)) is not None:
            current, degree = shrunk

    logger.debug(f"minimal internal subset has {len(current)} vertices")
    return frozenset(current)
