# routes/werner.py - Werner thresholds and the P_r^- limit report
from typing import Optional

from fastapi import APIRouter, Query

from config import DEFAULT_SEED, get_settings
from models.werner import WernerParams
from routes.common import clamp_restarts, compute, ok
from utils.werner import werner_is_ppt, werner_limit_report, werner_pt_kpos

router = APIRouter(prefix="/werner", tags=["Werner"])


@router.get("/threshold")
def threshold(
    n: int = Query(..., description="Local dimension"),
    alpha: float = Query(..., description="Werner parameter in [-1, 1]"),
    k: Optional[int] = Query(None, description="Schmidt rank; all k <= n when omitted"),
):
    def action():
        params = WernerParams(n=n, alpha=alpha)
        ks = [k] if k is not None else list(range(1, params.n + 1))
        return {
            "n": params.n,
            "alpha": params.alpha,
            "ppt": werner_is_ppt(params),
            "k_block_positive": {str(h): werner_pt_kpos(params, h) for h in ks},
        }

    return ok("Werner thresholds computed", compute(action))


@router.get("/limit")
def limit(
    n: int = Query(..., description="Local dimension"),
    rmax: int = Query(..., ge=1, le=64, description="Largest tensor power"),
    restarts: Optional[int] = Query(None, ge=0),
    seed: int = Query(DEFAULT_SEED, ge=0),
):
    def action():
        rows = werner_limit_report(
            n, rmax, heuristic_budget=clamp_restarts(restarts), size_cap=get_settings().size_cap, seed=seed,
        )
        return [row.model_dump(exclude={"witness"}) for row in rows]

    return ok("Limit report computed", compute(action))
