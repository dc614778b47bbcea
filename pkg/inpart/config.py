from pydantic import AliasChoices, BaseModel, Field

from inpart.experiments.config import SparsitySpec, SweepSpec
from inpart.graph.config import GenSpec
from inpart.solvers.config import HeuristicConfig, OracleLimits


class InpartConfig(BaseModel):
    generation: GenSpec | None = Field(
        None, validation_alias=AliasChoices("generation", "generate")
    )
    heuristic: HeuristicConfig = Field(default_factory=HeuristicConfig)
    oracle: OracleLimits = Field(
        default_factory=OracleLimits, validation_alias=AliasChoices("oracle", "brute")
    )
    sweep: SweepSpec | None = None
    sparsity: SparsitySpec | None = None
