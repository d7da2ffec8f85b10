# models/payloads.py - Shared JSON matrix format and HTTP request/response bodies
from typing import Any, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from models.linalg import BipartiteOperator, PureState


class MatrixPayload(BaseModel):
    """{"n", "m", "kind": "vector" | "operator", "data": [[re, im], ...]}, row-major."""

    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    kind: Literal["vector", "operator"]
    data: List[List[float]]

    @field_validator("data")
    @classmethod
    def validate_pairs(cls, v):
        if any(len(pair) != 2 for pair in v):
            raise ValueError("every entry of data must be an [re, im] pair")
        return v

    @model_validator(mode="after")
    def validate_length(self) -> "MatrixPayload":
        side = self.n * self.m
        expected = side if self.kind == "vector" else side * side
        if len(self.data) != expected:
            raise ValueError(f"{self.kind} on {self.n}x{self.m} needs {expected} entries, got {len(self.data)}")
        return self

    def to_state(self, normalize: bool = False) -> PureState:
        if self.kind != "vector":
            raise ValueError(f"expected a vector payload, got {self.kind!r}")
        if normalize:
            amplitudes = [complex(re, im) for re, im in self.data]
            return PureState.from_amplitudes(amplitudes, self.n, self.m, normalize=True)
        return PureState.model_validate(self.model_dump())

    def to_operator(self) -> BipartiteOperator:
        if self.kind != "operator":
            raise ValueError(f"expected an operator payload, got {self.kind!r}")
        return BipartiteOperator.model_validate(self.model_dump())


class VectorNormRequest(BaseModel):
    state: MatrixPayload
    k: int = Field(..., ge=1)
    normalize: bool = False


class SchmidtRequest(BaseModel):
    state: MatrixPayload
    tol: Optional[float] = Field(None, gt=0)
    normalize: bool = False


class OperatorRequest(BaseModel):
    operator: MatrixPayload
    k: int = Field(..., ge=1)
    restarts: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = Field(None, ge=0)


class ResponseSchema(BaseModel):
    code: str
    status: str
    message: str
    result: Optional[Any] = None
