import os
from typing import Literal

from pydantic import AliasChoices, BaseModel, Field


def default_workers() -> int:
    """Worker count from `INPART_WORKERS`, falling back to the number of CPUs"""
    if (workers := os.environ.get("INPART_WORKERS")) is not None:
        return max(1, int(workers))
    return os.cpu_count() or 1


class HeuristicConfig(BaseModel):
    seed: int = Field(0, ge=0, lt=2**64)
    # Defaults to 50 * n
    max_iters: int | None = Field(
        None, ge=1, validation_alias=AliasChoices("max_iters", "max_iterations")
    )
    # Allowed deviation of |A| from n/2; defaults to ceil(log_d(n))
    balance_slack: int | None = Field(
        None, ge=1, validation_alias=AliasChoices("balance_slack", "slack")
    )
    kick: Literal["random_from_larger"] = "random_from_larger"
    # Iterations without a new best objective before a kick; defaults to n
    patience: int | None = Field(None, ge=1)


class OracleLimits(BaseModel):
    max_n_partition: int = Field(24, ge=1, le=62)
    max_set_degeneracy: int = Field(20, ge=1, le=62)
    max_n_four_sparse: int = Field(64, ge=1)
    max_workers: int = Field(default_factory=default_workers, ge=1)
