# routes/schmidt.py - Schmidt decomposition and vector k-norms
from fastapi import APIRouter

from models.payloads import SchmidtRequest, VectorNormRequest
from routes.common import check_size, compute, ok
from utils.schmidt import schmidt_coefficients, schmidt_decompose, vector_k_norm

router = APIRouter(prefix="/schmidt", tags=["Schmidt"])


@router.post("/decompose")
def decompose(request: SchmidtRequest):
    def action():
        check_size(request.state)
        state = request.state.to_state(normalize=request.normalize)
        if request.tol is None:
            return schmidt_decompose(state)
        return schmidt_decompose(state, request.tol)

    decomposition = compute(action)
    return ok("Schmidt decomposition computed", decomposition.model_dump())


@router.post("/vecnorm")
def vecnorm(request: VectorNormRequest):
    def action():
        check_size(request.state)
        state = request.state.to_state(normalize=request.normalize)
        coefficients = schmidt_coefficients(state.amplitudes, state.dims.n, state.dims.m)
        return {
            "k": request.k,
            "norm": vector_k_norm(state, request.k),
            "schmidt_coefficients": [float(c) for c in coefficients],
        }

    return ok("Vector k-norm computed", compute(action))
