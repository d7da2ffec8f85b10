# routes/witness.py - k-block positivity certification
from fastapi import APIRouter

from config import DEFAULT_SEED
from models.payloads import OperatorRequest
from routes.common import check_size, clamp_restarts, compute, ok
from utils.witness import certify

router = APIRouter(prefix="/kpos", tags=["k-block positivity"])


@router.post("/certify")
def certify_operator(request: OperatorRequest):
    def action():
        check_size(request.operator)
        operator = request.operator.to_operator()
        seed = DEFAULT_SEED if request.seed is None else request.seed
        return certify(operator, request.k, restarts=clamp_restarts(request.restarts), seed=seed)

    verdict = compute(action)
    return ok(f"Verdict: {verdict.status.value}", verdict.model_dump(mode="json"))
