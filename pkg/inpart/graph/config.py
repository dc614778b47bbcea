from typing import Literal

from pydantic import AliasChoices, BaseModel, Field, model_validator


class GenSpec(BaseModel):
    n: int = Field(ge=1, validation_alias=AliasChoices("n", "vertices"))
    d: int = Field(ge=0, validation_alias=AliasChoices("d", "degree"))
    seed: int = Field(0, ge=0, lt=2**64)
    max_attempts: int = Field(1000, ge=1)
    # "configuration" rejects non-simple pairings outright,
    # "pairing" only re-pairs the offending stubs
    method: Literal["configuration", "pairing"] = "configuration"

    @model_validator(mode="after")
    def _degree_below_order(self) -> "GenSpec":
        if self.d >= self.n:
            raise ValueError(f"degree {self.d} needs to be smaller than n = {self.n}")
        return self
