# routes/common.py - Shared request handling for the numerical routers
import logging
from typing import Callable, Optional, TypeVar

from fastapi import HTTPException

from config import get_settings
from models.linalg import BipartiteDims
from models.payloads import MatrixPayload, ResponseSchema
from utils.errors import NumericalFailure, SizeCapExceededError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def check_size(payload: MatrixPayload):
    side = BipartiteDims(n=payload.n, m=payload.m).total
    cap = get_settings().size_cap
    if side > cap:
        raise SizeCapExceededError(f"matrix side {side} exceeds the service size cap {cap}")


def clamp_restarts(requested: Optional[int]) -> int:
    limit = get_settings().max_restarts
    return limit if requested is None else min(requested, limit)


def compute(action: Callable[[], T]) -> T:
    """Run a library call, mapping bad input to 400 and solver failures to 500."""
    try:
        return action()
    except NumericalFailure as error:
        logger.error(f"numerical failure: {error}")
        raise HTTPException(status_code=500, detail=f"Numerical failure: {error}")
    except ValueError as error:
        raise HTTPException(status_code=400, detail=str(error))


def ok(message: str, result) -> dict:
    return ResponseSchema(code="200", status="Ok", message=message, result=result).model_dump(exclude_none=True)
