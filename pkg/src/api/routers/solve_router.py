import json
import os
import tempfile

from fastapi import APIRouter, HTTPException

from src.api.models.solve_models import SolveRequest, SolveResponse
from src.main import cell_dir, cmd_solve
from src.utils.config import build_experiment_config
from src.utils.errors import ConfigError, DecompositionError, OracleCapExceededError, PatternError
from src.utils.logger import get_logger

logger = get_logger("API")

# fine-grid points per direction a single request may ask for
MAX_GRID = int(os.getenv("CLUSTERBOUND_API_MAX_GRID", "32"))

router = APIRouter(prefix="/api", tags=["solve"])


def _read_json(path: str):
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


# -------------------------------------------------------------------
# /api/solve – PCG on the model problem against its bounds
# -------------------------------------------------------------------
@router.post("/solve", response_model=SolveResponse)
def solve(req: SolveRequest) -> SolveResponse:
    grid = req.problem.n_sub * req.problem.H_over_h
    if grid > MAX_GRID:
        raise HTTPException(status_code=400, detail=f"grid of {grid} points per direction exceeds {MAX_GRID}")

    with tempfile.TemporaryDirectory(prefix="clusterbound_") as out_dir:
        try:
            cfg = build_experiment_config(
                {
                    "problem": req.problem.model_dump(),
                    "preconditioner": {"coarse_space": req.coarse_space, "overlap": req.overlap},
                    "estimator": {"enabled": req.estimator},
                },
                eps=req.eps,
                out_dir=out_dir,
            )
            row = cmd_solve(cfg, check_ritz=req.check_ritz)
        except (ConfigError, PatternError, DecompositionError, OracleCapExceededError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        except Exception as e:
            logger.error("solve failed: %s: %s", type(e).__name__, e)
            raise HTTPException(status_code=500, detail=str(e))

        target = cell_dir(out_dir, req.coarse_space, row.n_sub)
        bound_report = _read_json(os.path.join(target, "bound_report.json"))
        ritz_check = _read_json(os.path.join(target, "ritz_check.json"))

    fields = set(SolveResponse.model_fields) - {"bound_report", "ritz_check"}
    return SolveResponse(
        **{k: v for k, v in row.to_dict().items() if k in fields},
        bound_report=bound_report,
        ritz_check=ritz_check,
    )
