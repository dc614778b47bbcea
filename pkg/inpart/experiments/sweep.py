"""Batch experiments on random regular graphs.

Every (n, d, run index) triple gets its own seeds, mixed from the base seed
with `numpy.random.SeedSequence`, so single cells can be rerun in isolation
and the number of workers never changes the output.
"""

import logging
import time
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Literal, NewType

import numpy as np
import pandas as pd
from tqdm import tqdm

from inpart.experiments.config import SweepSpec
from inpart.graph.config import GenSpec
from inpart.graph.core import (
    DemandFunctions,
    Graph,
    Partition,
    is_four_sparse,
    verify_internal,
)
from inpart.graph.generation import random_regular
from inpart.solvers.config import HeuristicConfig, OracleLimits
from inpart.solvers.constructive import (
    DichotomyFailure,
    SearchInvariantError,
    run_constructive,
)
from inpart.solvers.heuristic import local_search, objective_violation
from inpart.solvers.oracle import brute_force_partition

__all__ = [
    "ExperimentRecord",
    "InternalVerificationError",
    "derive_seeds",
    "run_sweep",
    "sparsity_frequency",
    "write_records_csv",
    "write_sparsity_csv",
]

logger = logging.getLogger("inpart")

Milliseconds = NewType("Milliseconds", float)


class InternalVerificationError(RuntimeError):
    """Raised when a partition a solver reported as found fails verification"""


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    d: int
    run_index: int
    seed: int
    """Seed the graph was drawn with"""
    algorithm: Literal["constructive", "heuristic", "brute"]
    four_sparse: bool
    converged: bool
    iterations: int
    wall_time_ms: Milliseconds
    """Solver time only; not reproducible"""
    objective_final: int
    """Remaining demand violation; -1 if the solver produced no partition to score"""


RECORD_COLUMNS = tuple(field.name for field in fields(ExperimentRecord))


def derive_seeds(base_seed: int, n: int, d: int, run_index: int) -> tuple[int, int]:
    """(graph seed, solver seed) for one run, both below 2^63."""
    state = np.random.SeedSequence([base_seed, n, d, run_index]).generate_state(
        2, np.uint64
    )
    graph_seed, solver_seed = (int(word) >> 1 for word in state)
    return graph_seed, solver_seed


def _generator_for(spec: SweepSpec, d: int) -> Literal["configuration", "pairing"]:
    if spec.generator == "auto":
        return "configuration" if d <= 4 else "pairing"
    return spec.generator


def _demands_for(g: Graph, rule: Literal["ceil_half", "split"]) -> DemandFunctions:
    match rule:
        case "ceil_half":
            return DemandFunctions.internal(g)
        case "split":
            return DemandFunctions.split(g)


def _run_one(spec: SweepSpec, n: int, d: int, run_index: int) -> ExperimentRecord:
    graph_seed, solver_seed = derive_seeds(spec.base_seed, n, d, run_index)
    g = random_regular(
        GenSpec(
            n=n,
            d=d,
            seed=graph_seed,
            max_attempts=spec.max_attempts,
            method=_generator_for(spec, d),
        )
    )
    dem = _demands_for(g, spec.demand_rule)
    four_sparse = is_four_sparse(g).sparse

    partition: Partition | None = None
    iterations, objective_final = 0, -1
    start = time.perf_counter()
    match spec.algorithm:
        case "constructive":
            if not four_sparse and not spec.force:
                logger.info(f"skipping n={n}, d={d}, run {run_index}: not 4-sparse")
            else:
                try:
                    result = run_constructive(g, dem, force=spec.force)
                    partition = result.partition
                    iterations = len(result.state.trace)
                except (DichotomyFailure, SearchInvariantError) as e:
                    logger.warning(f"n={n}, d={d}, run {run_index}: {e}")
                    iterations = len(e.state.trace)
        case "heuristic":
            outcome = local_search(
                g,
                dem,
                HeuristicConfig(seed=solver_seed, max_iters=spec.max_iters_factor * n),
            )
            partition = outcome.partition
            iterations = outcome.iterations
            objective_final = outcome.final_objective
        case "brute":
            partition = brute_force_partition(g, dem, OracleLimits(max_workers=1))
    wall_time_ms = Milliseconds((time.perf_counter() - start) * 1000)

    if partition is not None:
        report = verify_internal(g, partition, dem)
        if not report.ok:
            raise InternalVerificationError(
                f"{spec.algorithm} returned a partition for n={n}, d={d}, "
                f"run {run_index} (graph seed {graph_seed}) that fails verification: "
                f"{list(report.violations[:5])}"
            )
        objective_final = objective_violation(g, partition, dem)

    return ExperimentRecord(
        n=n,
        d=d,
        run_index=run_index,
        seed=graph_seed,
        algorithm=spec.algorithm,
        four_sparse=four_sparse,
        converged=partition is not None,
        iterations=iterations,
        wall_time_ms=wall_time_ms,
        objective_final=objective_final,
    )


def run_sweep(spec: SweepSpec) -> list[ExperimentRecord]:
    """Runs every cell `runs_per_cell` times, sorted by (n, d, run index).

    A converged run whose partition fails verification aborts the sweep.
    """
    tasks = [
        (n, d, run_index)
        for n in spec.n_values
        for d in spec.d_values
        for run_index in range(spec.runs_per_cell)
    ]
    logger.info(
        f"sweeping {len(tasks)} runs of the {spec.algorithm} algorithm "
        f"on {spec.max_workers} worker(s)"
    )

    records: list[ExperimentRecord] = []
    if spec.max_workers == 1:
        for n, d, run_index in (progress := tqdm(tasks)):
            progress.set_description(f"n={n} d={d}")
            records.append(_run_one(spec, n, d, run_index))
    else:
        with ProcessPoolExecutor(max_workers=spec.max_workers) as executor:
            futures = [executor.submit(_run_one, spec, *task) for task in tasks]
            for future in tqdm(as_completed(futures), total=len(futures)):
                records.append(future.result())

    records.sort(key=lambda record: (record.n, record.d, record.run_index))
    converged = sum(record.converged for record in records)
    logger.info(f"{converged} of {len(records)} runs produced a verified partition")
    return records


def _sample_is_four_sparse(n: int, d: int, seed: int, max_attempts: int) -> bool:
    g = random_regular(
        GenSpec(n=n, d=d, seed=seed, max_attempts=max_attempts, method="configuration")
    )
    return is_four_sparse(g).sparse


def sparsity_frequency(
    n_values: Sequence[int],
    d: int,
    runs: int,
    base_seed: int,
    *,
    max_attempts: int = 1000,
    max_workers: int = 1,
) -> dict[int, float]:
    """The fraction of configuration-model samples that are 4-sparse, per n."""
    if runs < 1:
        raise ValueError("at least one run per n is needed")
    if len(set(n_values)) != len(n_values):
        logger.warning(f"counting repeated values of n once: {list(n_values)}")
        n_values = list(dict.fromkeys(n_values))
    tasks = [
        (n, derive_seeds(base_seed, n, d, run_index)[0])
        for n in n_values
        for run_index in range(runs)
    ]

    if max_workers == 1:
        outcomes = [
            _sample_is_four_sparse(n, d, seed, max_attempts)
            for n, seed in tqdm(tasks, desc=f"d={d}")
        ]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            outcomes = list(
                tqdm(
                    executor.map(
                        _sample_is_four_sparse,
                        [n for n, _ in tasks],
                        [d] * len(tasks),
                        [seed for _, seed in tasks],
                        [max_attempts] * len(tasks),
                        chunksize=max(1, runs // 4),
                    ),
                    total=len(tasks),
                    desc=f"d={d}",
                )
            )

    sparse_counts = dict.fromkeys(n_values, 0)
    for (n, _), sparse in zip(tasks, outcomes):
        sparse_counts[n] += sparse
    fractions = {n: count / runs for n, count in sparse_counts.items()}
    for n, fraction in fractions.items():
        logger.info(f"n={n}, d={d}: {fraction:.3f} of {runs} samples are 4-sparse")
    return fractions


def _to_csv_atomically(df: pd.DataFrame, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    try:
        df.to_csv(tmp_path, index=False)
    except Exception:
        tmp_path.unlink(missing_ok=True)
        raise
    tmp_path.rename(path)


def write_records_csv(records: Iterable[ExperimentRecord], path: Path) -> None:
    df = pd.DataFrame([asdict(record) for record in records], columns=list(RECORD_COLUMNS))
    df["wall_time_ms"] = df["wall_time_ms"].astype(float).round(3)
    _to_csv_atomically(df, path)
    logger.info(f"wrote {len(df)} records to {path}")


def write_sparsity_csv(
    fractions: Mapping[int, float], path: Path, *, d: int, runs: int
) -> None:
    df = pd.DataFrame(
        {
            "n": list(fractions),
            "d": d,
            "runs": runs,
            "four_sparse": [round(fraction * runs) for fraction in fractions.values()],
            "fraction": list(fractions.values()),
        }
    )
    _to_csv_atomically(df, path)
    logger.info(f"wrote sparsity fractions for {len(df)} values of n to {path}")
