"""
Records used by the verification harness.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

DEFAULT_WEIGHTS = ["-1", "-1/2", "-1/3", "-2", "-3"]


class GenSpec(BaseModel):
    """
    Everything needed to regenerate an instance. Identical specs give identical matrices.

    ``weights`` is the palette of subcritical weights (all negative); generated cycles may
    also use weight 0.
    """

    n: int = Field(ge=1)
    density: float = Field(default=0.5, ge=0.0, le=1.0)
    weights: List[str] = Field(default_factory=lambda: list(DEFAULT_WEIGHTS))
    structure: Literal["free", "planted", "low-rank", "boolean"] = "free"
    planted: List[int] = Field(default_factory=list)
    rank: Optional[int] = None
    seed: int = Field(default=0, ge=0, lt=2**64)
    scale: bool = True

    @field_validator("weights")
    @classmethod
    def _negative_weights(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("weight palette is empty")
        for w in value:
            if Fraction(w) >= 0:
                raise ValueError(f"palette weight {w} is not negative")
        return value

    @model_validator(mode="after")
    def _structure_flags(self) -> "GenSpec":
        if self.structure == "planted":
            if not self.planted:
                raise ValueError("planted structure needs at least one cycle length")
            if any(L < 1 or L > self.n for L in self.planted):
                raise ValueError(f"planted cycle lengths must lie in 1..{self.n}")
        elif self.planted:
            raise ValueError("cycle lengths given without planted structure")
        if self.structure == "low-rank":
            if self.rank is None or not 1 <= self.rank <= self.n:
                raise ValueError(f"low-rank structure needs 1 <= rank <= {self.n}")
        elif self.rank is not None:
            raise ValueError("rank given without low-rank structure")
        return self

    def palette(self) -> List[Fraction]:
        return [Fraction(w) for w in self.weights]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


class ViolationReport(BaseModel):
    """
    One failed property. ``node`` is 1-based; ``instance`` is the matrix document of the
    offending instance, so every report is a reproducer.
    """

    property: str
    node: Optional[int] = None
    measured: Optional[int] = None
    bound: Optional[int] = None
    instance: Dict[str, Any] = Field(default_factory=dict)
    detail: str = ""


class SuiteResult(BaseModel):
    suite: str
    trials: int
    seed: int
    nmax: Optional[int] = None
    instances_checked: int = 0
    violations: List[ViolationReport] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations
