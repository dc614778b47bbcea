from pathlib import Path
from typing import Literal

from pydantic import AliasChoices, BaseModel, Field, model_validator

from inpart.solvers.config import default_workers


class SweepSpec(BaseModel):
    n_values: list[int] = Field(
        min_length=1, validation_alias=AliasChoices("n_values", "n")
    )
    d_values: list[int] = Field(
        min_length=1, validation_alias=AliasChoices("d_values", "d")
    )
    runs_per_cell: int = Field(
        ge=1, validation_alias=AliasChoices("runs_per_cell", "runs")
    )
    base_seed: int = Field(
        0, ge=0, lt=2**64, validation_alias=AliasChoices("base_seed", "seed")
    )
    algorithm: Literal["constructive", "heuristic", "brute"] = "heuristic"

    # "ceil_half": a = b = ceil(d/2); "split": a = ceil(d/2), b = floor(d/2)
    demand_rule: Literal["ceil_half", "split"] = "ceil_half"

    # "auto" draws from the configuration model for d <= 4 and pairs incrementally above
    generator: Literal["auto", "configuration", "pairing"] = "auto"
    max_attempts: int = Field(1000, ge=1)

    # The heuristic gets `max_iters_factor * n` iterations
    max_iters_factor: int = Field(50, ge=1)

    # Run the constructive solver on samples that are not 4-sparse as well
    force: bool = False

    max_workers: int = Field(
        default_factory=default_workers,
        ge=1,
        validation_alias=AliasChoices("max_workers", "workers"),
    )
    out: Path = Field(
        Path("sweep.csv"), validation_alias=AliasChoices("out", "output_file")
    )

    @model_validator(mode="after")
    def _cells_are_feasible(self) -> "SweepSpec":
        for n in self.n_values:
            for d in self.d_values:
                if d < 0 or d >= n:
                    raise ValueError(f"cell n={n}, d={d}: need 0 <= d < n")
                if (n * d) % 2:
                    raise ValueError(f"cell n={n}, d={d}: n * d is odd")
        if self.algorithm in ("heuristic", "brute") and min(self.n_values) < 4:
            raise ValueError(f"the {self.algorithm} algorithm needs n >= 4")
        if self.algorithm == "constructive":
            if min(self.d_values) < 4:
                raise ValueError("the constructive algorithm needs d >= 4")
            if self.demand_rule == "ceil_half" and any(d % 2 for d in self.d_values):
                raise ValueError(
                    "the constructive algorithm needs a + b = d; "
                    "use demand_rule 'split' for odd degrees"
                )
        return self


class SparsitySpec(BaseModel):
    n_values: list[int] = Field(
        min_length=1, validation_alias=AliasChoices("n_values", "n")
    )
    d: int = Field(4, ge=0, validation_alias=AliasChoices("d", "degree"))
    runs: int = Field(
        200, ge=1, validation_alias=AliasChoices("runs", "runs_per_cell")
    )
    base_seed: int = Field(
        0, ge=0, lt=2**64, validation_alias=AliasChoices("base_seed", "seed")
    )
    max_attempts: int = Field(1000, ge=1)
    max_workers: int = Field(
        default_factory=default_workers,
        ge=1,
        validation_alias=AliasChoices("max_workers", "workers"),
    )
    out: Path = Field(
        Path("sparsity.csv"), validation_alias=AliasChoices("out", "output_file")
    )

    @model_validator(mode="after")
    def _samples_are_feasible(self) -> "SparsitySpec":
        if len(set(self.n_values)) != len(self.n_values):
            raise ValueError(f"n_values {self.n_values} repeat a value")
        for n in self.n_values:
            if n <= self.d + 1:
                raise ValueError(f"n = {n} needs to exceed d + 1 = {self.d + 1}")
            if (n * self.d) % 2:
                raise ValueError(f"n * d = {n} * {self.d} is odd")
        return self
