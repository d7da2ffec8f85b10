# models/verdicts.py - k-block positivity verdicts and canonical Kraus data
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from config import SCHMIDT_RANK_TOL
from models.linalg import PureState, complex_pairs
from models.norms import Interval


class VerdictStatus(str, Enum):
    K_BLOCK_POSITIVE = "KBlockPositive"
    NOT_K_BLOCK_POSITIVE = "NotKBlockPositive"
    INCONCLUSIVE = "Inconclusive"


class Verdict(BaseModel):
    """Outcome of a k-block positivity test together with its certificate.

    A NotKBlockPositive verdict carries either a witness state (Schmidt rank
    <= k, negative expectation) or a negative-eigenvalue count. Inconclusive
    verdicts keep the intervals that failed to decide.
    """

    model_config = ConfigDict(frozen=True)

    status: VerdictStatus
    k: int = Field(..., ge=1)
    rule: str
    witness: Optional[PureState] = None
    witness_value: Optional[float] = None
    negative_count: Optional[int] = None
    intervals: Dict[str, Interval] = Field(default_factory=dict)
    details: Dict[str, float] = Field(default_factory=dict)
    diagnostics: List[Dict[str, str]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_certificate(self) -> "Verdict":
        if self.witness is not None:
            if self.status != VerdictStatus.NOT_K_BLOCK_POSITIVE:
                raise ValueError("only NotKBlockPositive verdicts carry a witness")
            if self.witness_value is None or self.witness_value >= 0:
                raise ValueError(f"witness value {self.witness_value!r} is not negative")
        return self

    @property
    def decisive(self) -> bool:
        return self.status != VerdictStatus.INCONCLUSIVE

    def summary(self) -> Dict[str, str]:
        return {"rule": self.rule, "status": self.status.value}


class KrausTerm(BaseModel):
    """weight * K rho K^* with K an m x n operator of unit Hilbert-Schmidt norm."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weight: float
    operator: np.ndarray

    @field_serializer("operator")
    def dump_operator(self, operator: np.ndarray) -> Dict[str, Any]:
        rows, cols = operator.shape
        return {"rows": rows, "cols": cols, "data": complex_pairs(operator)}

    @property
    def rank(self) -> int:
        values = np.linalg.svd(self.operator, compute_uv=False)
        if values.size == 0 or values[0] == 0:
            return 0
        return int(np.count_nonzero(values > SCHMIDT_RANK_TOL * values[0]))


class KrausDecomposition(BaseModel):
    """Canonical Kraus form Phi(rho) = sum_i w_i E_i rho E_i^* of a Hermiticity-preserving map.

    Weights are n times the Choi eigenvalues, so the positive terms have
    w_i > 0 and the negative terms w_i < 0.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    positive_ops: List[KrausTerm] = Field(default_factory=list)
    negative_ops: List[KrausTerm] = Field(default_factory=list)

    @property
    def terms(self) -> List[KrausTerm]:
        return list(self.positive_ops) + list(self.negative_ops)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        return sum(t.weight * t.operator @ rho @ t.operator.conj().T for t in self.terms)

    def choi(self) -> np.ndarray:
        """Rebuild (id_n (x) Phi)(E) from the terms."""
        side = self.n * self.m
        result = np.zeros((side, side), dtype=complex)
        for term in self.terms:
            vector = term.operator.T.reshape(-1)
            result += term.weight / self.n * np.outer(vector, vector.conj())
        return result

    def gram(self) -> np.ndarray:
        """Hilbert-Schmidt Gram matrix of all Kraus operators."""
        flat = np.array([t.operator.reshape(-1) for t in self.terms])
        if flat.size == 0:
            return np.zeros((0, 0))
        return flat.conj() @ flat.T
