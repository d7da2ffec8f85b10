# models/werner.py - Werner parameters, the P_r^- projector family and limit report rows
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from models.linalg import BipartiteOperator, PureState


class WernerParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Local dimension")
    alpha: float = Field(..., ge=-1.0, le=1.0, description="Werner parameter")

    @property
    def normalization(self) -> float:
        """n^2 - alpha n."""
        return self.n * self.n - self.alpha * self.n


class NegProjectorFamily(BaseModel):
    """P_r^-, the -1 eigenprojection of the r-th tensor power of I - 2E.

    `projector` is only materialized below the size cap; `rank` always comes
    from the closed form.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    r: int = Field(..., ge=1)
    rank: int
    projector: Optional[BipartiteOperator] = None

    @property
    def side(self) -> int:
        return self.n ** (2 * self.r)


class LimitReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    rank: int
    bound_ineq2: float
    bound_ineq1: float
    heuristic: Optional[float] = None
    threshold: float = 0.5
    flagged: bool = False
    witness: Optional[PureState] = None
