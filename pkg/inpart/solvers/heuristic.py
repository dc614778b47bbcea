"""Near-bisection local search for (a,b)-internal partitions.

Works on any graph, including odd degrees and graphs that are not 4-sparse.
Starting from a random balanced split, it repeatedly switches the vertex short of
its demand whose switch lowers the total demand violation the most.  When no such
switch is non-worsening, or the best objective has stalled for `patience`
iterations, a random vertex of the larger side moves to the smaller one instead.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from jaxtyping import Bool, Int

from inpart.graph.core import DemandFunctions, Graph, Partition, same_side_degrees
from inpart.solvers.config import HeuristicConfig

__all__ = [
    "HeuristicMove",
    "HeuristicResult",
    "objective_violation",
    "balance_slack_for",
    "local_search",
]

logger = logging.getLogger("inpart")


class HeuristicMove(NamedTuple):
    vertex: int
    kick: bool
    objective: int
    """Objective after the move"""


@dataclass(frozen=True)
class HeuristicResult:
    partition: Partition | None
    """Only set if the search converged"""
    iterations: int
    converged: bool
    final_objective: int
    trace: tuple[HeuristicMove, ...] = ()


def _violation(
    own: Int[np.ndarray, "n"], required: Int[np.ndarray, "n"], size_a: int, n: int
) -> int:
    empty_sides = int(size_a == 0) + int(size_a == n)
    return int(np.maximum(required - own, 0).sum()) + empty_sides


def objective_violation(g: Graph, p: Partition, dem: DemandFunctions) -> int:
    """Total demand shortfall, plus one for each empty side.

    Zero exactly for non-trivial (a,b)-internal partitions.
    """
    dem.check_lengths(g)
    own = same_side_degrees(g, p)
    required = np.where(p.mask, dem.a_array, dem.b_array)
    return _violation(own, required, len(p.side_a), g.n)


def balance_slack_for(g: Graph, slack: int | None = None) -> int:
    """The allowed deviation of |A| from n/2; ceil(log_d(n)) unless given."""
    if slack is not None:
        return max(1, slack)
    mean_degree = max(2.0, 2 * g.m / g.n) if g.n else 2.0
    # rounded to keep exact powers like log_10(100) from landing above an integer
    return max(1, math.ceil(round(math.log(max(g.n, 2)) / math.log(mean_degree), 9)))


def _switch_deltas(
    g: Graph,
    mask: Bool[np.ndarray, "n"],
    own: Int[np.ndarray, "n"],
    dem: DemandFunctions,
) -> Int[np.ndarray, "n"]:
    """The change of the objective if each vertex switched sides on its own."""
    n = g.n
    required = np.where(mask, dem.a_array, dem.b_array)
    required_after = np.where(mask, dem.b_array, dem.a_array)
    own_after = g.degrees - own

    self_delta = np.maximum(required_after - own_after, 0) - np.maximum(required - own, 0)

    # a neighbor on the same side loses one, a neighbor across gains one
    targets = g.indices
    same = mask[g.sources] == mask[targets]
    neighbor_delta = np.where(
        same,
        (own[targets] <= required[targets]).astype(np.int64),
        -(own[targets] < required[targets]).astype(np.int64),
    )
    neighbor_delta = np.bincount(g.sources, weights=neighbor_delta, minlength=n)

    size_a = int(mask.sum())
    size_own = np.where(mask, size_a, n - size_a)
    # leaving a side empty, or filling the empty other side
    empty_delta = (size_own == 1).astype(np.int64) - (size_own == n).astype(np.int64)

    return self_delta + neighbor_delta.astype(np.int64) + empty_delta


def local_search(
    g: Graph, dem: DemandFunctions, cfg: HeuristicConfig | None = None
) -> HeuristicResult:
    """Searches for an (a,b)-internal partition, deterministically given `cfg.seed`.

    Non-convergence within `max_iters` is reported in the result, not raised.
    """
    cfg = cfg or HeuristicConfig()
    n = g.n
    if n < 4:
        raise ValueError(f"local search needs at least 4 vertices, got {n}")
    dem.check_lengths(g)

    rng = np.random.default_rng(cfg.seed)
    max_iters = cfg.max_iters if cfg.max_iters is not None else 50 * n
    slack = balance_slack_for(g, cfg.balance_slack)
    patience = cfg.patience if cfg.patience is not None else n

    mask = np.zeros(n, dtype=bool)
    mask[rng.permutation(n)[: n // 2]] = True
    own = same_side_degrees(g, Partition.from_mask(mask)).copy()
    size_a = int(mask.sum())
    objective = _violation(
        own, np.where(mask, dem.a_array, dem.b_array), size_a, n
    )

    best, since_best = objective, 0
    trace: list[HeuristicMove] = []
    iterations = 0
    while objective > 0 and iterations < max_iters:
        iterations += 1
        deltas = _switch_deltas(g, mask, own, dem)
        required = np.where(mask, dem.a_array, dem.b_array)

        # switches keeping |A| within the slack
        size_after = np.where(mask, size_a - 1, size_a + 1)
        allowed = (own < required) & (np.abs(2 * size_after - n) <= 2 * slack)
        candidates = np.flatnonzero(allowed)

        unbalanced = abs(2 * size_a - n) > 2 * slack
        if not unbalanced and candidates.size and since_best < patience:
            x = int(candidates[np.argmin(deltas[candidates])])
            kick = bool(deltas[x] > 0)
        else:
            kick = True
        if kick:
            if 2 * size_a > n:
                pool = np.flatnonzero(mask)
            elif 2 * size_a < n:
                pool = np.flatnonzero(~mask)
            else:
                pool = np.arange(n)
            x = int(rng.choice(pool))
            since_best = 0
            logger.debug(f"iteration {iterations}: kicked vertex {x}")

        objective += int(deltas[x])
        nbrs = g.adjacency[x]
        side = mask[x]
        for u in nbrs:
            own[u] += -1 if mask[u] == side else 1
        own[x] = len(nbrs) - own[x]
        mask[x] = not side
        size_a += -1 if side else 1
        trace.append(HeuristicMove(vertex=x, kick=kick, objective=objective))

        if objective < best:
            best, since_best = objective, 0
        elif not kick:
            since_best += 1

    converged = objective == 0
    logger.debug(
        f"local search {'converged' if converged else 'stopped'} after {iterations} "
        f"iterations with objective {objective}"
    )
    return HeuristicResult(
        partition=Partition.from_mask(mask) if converged else None,
        iterations=iterations,
        converged=converged,
        final_objective=objective,
        trace=tuple(trace),
    )
