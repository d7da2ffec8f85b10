# models/norms.py - Certified intervals for the S(k) operator norms
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from config import BOUND_SLACK
from models.linalg import PureState


class Interval(BaseModel):
    """Closed interval [lower, upper] certified for some quantity."""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float


class NormBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    lower: float
    upper: float
    lower_witness: Optional[PureState] = None
    methods: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_order(self) -> "NormBounds":
        if self.lower > self.upper + BOUND_SLACK * max(1.0, abs(self.upper)):
            raise ValueError(f"lower bound {self.lower!r} exceeds upper bound {self.upper!r}")
        return self

    @property
    def interval(self) -> Interval:
        return Interval(lower=self.lower, upper=self.upper)


class ProjectionBounds(BaseModel):
    """Both projection lower bounds evaluated exactly from (n, m, rank, k)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    m: int
    rank: int
    k: int
    ineq1: Fraction
    ineq2: Fraction

    @field_serializer("ineq1", "ineq2")
    def dump_fraction(self, value: Fraction) -> float:
        return float(value)

    @property
    def best(self) -> Fraction:
        return max(self.ineq1, self.ineq2)
