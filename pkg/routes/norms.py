# routes/norms.py - Certified bounds on the S(k) operator norms
from fastapi import APIRouter

from config import DEFAULT_SEED
from models.payloads import OperatorRequest
from routes.common import check_size, clamp_restarts, compute, ok
from utils.opnorm import op_norm_bounds

router = APIRouter(prefix="/opnorm", tags=["Operator norms"])


@router.post("/bounds")
def bounds(request: OperatorRequest):
    def action():
        check_size(request.operator)
        operator = request.operator.to_operator()
        seed = DEFAULT_SEED if request.seed is None else request.seed
        return op_norm_bounds(operator, request.k, restarts=clamp_restarts(request.restarts), seed=seed)

    result = compute(action)
    return ok(f"Bounds on ||X||_S({request.k}) computed", result.model_dump())
