"""Random regular graphs and a small catalog of named graphs."""

import logging
from collections import Counter
from collections.abc import Sequence
from itertools import combinations

import networkx as nx
import numpy as np

from inpart.graph.config import GenSpec
from inpart.graph.core import Graph

__all__ = ["random_regular", "named_graph", "NAMED_GRAPHS"]

logger = logging.getLogger("inpart")

Edges = list[tuple[int, int]] | set[tuple[int, int]]


class ParityError(ValueError):
    """Raised when n * d is odd, so no d-regular graph on n vertices exists"""


class GenerationExhaustedError(RuntimeError):
    """Raised when every allowed attempt produced a loop or a repeated edge"""


class NamedGraphError(ValueError):
    """Raised for unknown graph names or unusable parameters"""


def random_regular(spec: GenSpec) -> Graph:
    """Draws a simple d-regular graph on n vertices, deterministically from `spec.seed`.

    With the "configuration" method, a uniform perfect matching of the n*d half-edges
    is drawn and thrown away whenever it has a loop or a parallel edge;
    the first simple outcome is uniform over all simple d-regular graphs.
    """
    if (spec.n * spec.d) % 2 != 0:
        raise ParityError(f"n * d = {spec.n} * {spec.d} is odd")
    if spec.d == 0:
        return Graph.from_edges(spec.n, [])

    rng = np.random.default_rng(spec.seed)
    sampler = (
        _configuration_pairing
        if spec.method == "configuration"
        else _incremental_pairing
    )
    for attempt in range(1, spec.max_attempts + 1):
        edges = sampler(rng, spec.n, spec.d)
        if edges is not None:
            logger.debug(
                f"drew a simple {spec.d}-regular graph on {spec.n} vertices "
                f"after {attempt} attempt(s)"
            )
            return Graph.from_edges(spec.n, sorted(edges))

    raise GenerationExhaustedError(
        f"no simple {spec.d}-regular graph on {spec.n} vertices "
        f"after {spec.max_attempts} attempts ({spec.method} method, seed {spec.seed})"
    )


def _configuration_pairing(rng: np.random.Generator, n: int, d: int) -> Edges | None:
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    lo, hi = pairs.min(axis=1), pairs.max(axis=1)
    if np.any(lo == hi):
        return None
    if np.unique(lo * n + hi).size != lo.size:
        return None
    return list(zip(lo.tolist(), hi.tolist()))


def _incremental_pairing(rng: np.random.Generator, n: int, d: int) -> Edges | None:
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)

    while stubs.size:
        rng.shuffle(stubs)
        leftover: Counter[int] = Counter()
        for s1, s2 in stubs.reshape(-1, 2).tolist():
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1

        if leftover and not any(
            pair not in edges for pair in combinations(sorted(leftover), 2)
        ):
            # only loops or existing edges can be formed from here on
            return None

        stubs = np.repeat(
            np.fromiter(leftover.keys(), dtype=np.int64, count=len(leftover)),
            np.fromiter(leftover.values(), dtype=np.int64, count=len(leftover)),
        )
    return edges


NAMED_GRAPHS = (
    "complete",
    "complete_bipartite",
    "cycle",
    "circulant",
    "petersen",
    "path",
    "star",
    "diamond",
)


def named_graph(name: str, params: Sequence[int] = ()) -> Graph:
    """Builds a standard graph with its canonical vertex numbering.

    `complete k`, `complete_bipartite k l`, `cycle k`, `circulant k offset...`,
    `petersen` (outer 5-cycle 0..4, inner pentagram 5..9), `path k`,
    `star k` (center 0 and k leaves) and `diamond`.
    """
    params = tuple(params)

    def arity(expected: int) -> None:
        if len(params) != expected:
            raise NamedGraphError(
                f"{name} takes {expected} parameter(s), got {len(params)}"
            )
        if any(p < 0 for p in params):
            raise NamedGraphError(f"parameters of {name} must be non-negative")

    match name:
        case "complete":
            arity(1)
            graph = nx.complete_graph(params[0])
        case "complete_bipartite":
            arity(2)
            graph = nx.complete_bipartite_graph(*params)
        case "cycle":
            arity(1)
            if params[0] < 3:
                raise NamedGraphError("a cycle needs at least 3 vertices")
            graph = nx.cycle_graph(params[0])
        case "circulant":
            if len(params) < 2:
                raise NamedGraphError("circulant takes k and at least one offset")
            k, offsets = params[0], params[1:]
            if any(not 0 < offset < k for offset in offsets):
                raise NamedGraphError(f"circulant offsets must lie in 1..{k - 1}")
            graph = nx.circulant_graph(k, offsets)
        case "petersen":
            arity(0)
            graph = nx.petersen_graph()
        case "path":
            arity(1)
            graph = nx.path_graph(params[0])
        case "star":
            arity(1)
            graph = nx.star_graph(params[0])
        case "diamond":
            arity(0)
            graph = nx.diamond_graph()
        case _:
            raise NamedGraphError(
                f"unknown graph {name!r}, expected one of {', '.join(NAMED_GRAPHS)}"
            )

    return Graph.from_networkx(graph)
