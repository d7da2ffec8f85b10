# models/linalg.py - Bipartite states, operators and spectral data
from typing import Any, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_serializer, model_validator

from config import HERMITIAN_RTOL, UNIT_NORM_TOL
from utils.errors import DimensionMismatchError, RankOutOfRangeError


def complex_pairs(values: np.ndarray) -> List[List[float]]:
    """Flatten (row-major) into the shared [re, im] pair format."""
    flat = np.asarray(values).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_complex(data: Any) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("data must be an array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def hermitian_defect(entries: np.ndarray) -> float:
    """max |X - X*| entry."""
    if entries.size == 0:
        return 0.0
    return float(np.max(np.abs(entries - entries.conj().T)))


class BipartiteDims(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="First factor dimension")
    m: int = Field(..., ge=1, description="Second factor dimension")

    @property
    def total(self) -> int:
        return self.n * self.m

    @property
    def max_rank(self) -> int:
        """Schmidt-rank ceiling min(n, m)."""
        return min(self.n, self.m)

    def check_k(self, k: int, name: str = "k") -> int:
        if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
            raise RankOutOfRangeError(f"{name} must be an integer, got {k!r}")
        if k < 1 or k > self.max_rank:
            raise RankOutOfRangeError(
                f"{name}={k} out of range: need 1 <= {name} <= min(n, m) = {self.max_rank}"
            )
        return int(k)


class PureState(BaseModel):
    """Unit vector on H_n (x) H_m, amplitudes row-major over |e_i>|f_j>."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray
    dims: BipartiteDims

    @model_validator(mode="before")
    @classmethod
    def coerce_amplitudes(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        if "data" in data:
            # shared file format
            if data.get("kind", "vector") != "vector":
                raise ValueError(f"expected kind 'vector', got {data.get('kind')!r}")
            data = {"amplitudes": pairs_to_complex(data["data"]), "dims": {"n": data.get("n"), "m": data.get("m")}}
        amplitudes = np.asarray(data.get("amplitudes"), dtype=complex)
        if amplitudes.ndim != 1:
            raise ValueError("amplitudes must be a one-dimensional vector")
        return {**data, "amplitudes": _frozen(amplitudes)}

    @model_validator(mode="after")
    def check_unit(self) -> "PureState":
        if self.amplitudes.shape[0] != self.dims.total:
            raise DimensionMismatchError(
                f"state has {self.amplitudes.shape[0]} amplitudes but n*m = {self.dims.total}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"state is not a unit vector (norm {norm:.12g}); normalize it first")
        return self

    @model_serializer(mode="plain")
    def dump_shared(self) -> dict:
        return {"n": self.dims.n, "m": self.dims.m, "kind": "vector", "data": complex_pairs(self.amplitudes)}

    @classmethod
    def from_amplitudes(cls, amplitudes, n: int, m: int, normalize: bool = False) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amplitudes)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amplitudes = amplitudes / norm
        return cls(amplitudes=amplitudes, dims=BipartiteDims(n=n, m=m))

    def as_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims.n, self.dims.m)


class BipartiteOperator(BaseModel):
    """(nm) x (nm) matrix on H_n (x) H_m with a cached Hermiticity flag."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    dims: BipartiteDims
    hermitian: bool = False

    @model_validator(mode="before")
    @classmethod
    def coerce_entries(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        if "data" in data:
            if data.get("kind", "operator") != "operator":
                raise ValueError(f"expected kind 'operator', got {data.get('kind')!r}")
            n, m = data.get("n"), data.get("m")
            flat = pairs_to_complex(data["data"])
            side = int(n) * int(m) if n and m else 0
            if flat.shape[0] != side * side:
                raise DimensionMismatchError(
                    f"operator data has {flat.shape[0]} entries, expected (n*m)^2 = {side * side}"
                )
            data = {"entries": flat.reshape(side, side), "dims": {"n": n, "m": m}}
        entries = np.asarray(data.get("entries"))
        if not (np.issubdtype(entries.dtype, np.floating) or np.issubdtype(entries.dtype, np.complexfloating)):
            entries = entries.astype(complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(f"operator must be a square matrix, got shape {entries.shape}")
        scale = float(np.max(np.abs(entries))) if entries.size else 0.0
        hermitian = hermitian_defect(entries) <= HERMITIAN_RTOL * scale
        return {**data, "entries": _frozen(entries), "hermitian": hermitian}

    @model_validator(mode="after")
    def check_dims(self) -> "BipartiteOperator":
        if self.entries.shape[0] != self.dims.total:
            raise DimensionMismatchError(
                f"operator side {self.entries.shape[0]} does not match n*m = {self.dims.total}"
            )
        return self

    @model_serializer(mode="plain")
    def dump_shared(self) -> dict:
        return {"n": self.dims.n, "m": self.dims.m, "kind": "operator", "data": complex_pairs(self.entries)}

    @classmethod
    def from_matrix(cls, entries, n: int, m: int) -> "BipartiteOperator":
        return cls(entries=entries, dims=BipartiteDims(n=n, m=m))

    @property
    def side(self) -> int:
        return self.entries.shape[0]

    @property
    def scale(self) -> float:
        """Largest absolute entry; 1.0 for the zero operator."""
        s = float(np.max(np.abs(self.entries))) if self.entries.size else 0.0
        return s if s > 0 else 1.0

    def adjoint(self) -> "BipartiteOperator":
        return BipartiteOperator(entries=self.entries.conj().T, dims=self.dims)


class SpectralSplit(BaseModel):
    """Eigendata of a Hermitian X split into positive, zero and negative parts."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    pos_part: BipartiteOperator
    neg_part: BipartiteOperator
    proj_zero: BipartiteOperator
    proj_neg: BipartiteOperator
    tol_zero: float

    @field_serializer("eigenvalues")
    def dump_eigenvalues(self, values: np.ndarray) -> List[float]:
        return [float(x) for x in values]

    @field_serializer("eigenvectors")
    def dump_eigenvectors(self, vectors: np.ndarray) -> List[List[float]]:
        return complex_pairs(vectors)

    @property
    def dims(self) -> BipartiteDims:
        return self.pos_part.dims

    @property
    def negative_mask(self) -> np.ndarray:
        return self.eigenvalues < -self.tol_zero

    @property
    def positive_mask(self) -> np.ndarray:
        return self.eigenvalues > self.tol_zero

    @property
    def zero_mask(self) -> np.ndarray:
        return ~(self.negative_mask | self.positive_mask)

    @property
    def negative_values(self) -> np.ndarray:
        return self.eigenvalues[self.negative_mask]

    @property
    def positive_values(self) -> np.ndarray:
        return self.eigenvalues[self.positive_mask]

    @property
    def negative_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.negative_mask]

    @property
    def positive_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.positive_mask]

    @property
    def zero_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.zero_mask]

    @property
    def negative_count(self) -> int:
        return int(np.count_nonzero(self.negative_mask))

    @property
    def zero_count(self) -> int:
        return int(np.count_nonzero(self.zero_mask))
