from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from src.utils.config import DEFAULT_EPS, CoarseKind, ProblemConfig


class SolveRequest(BaseModel):
    """One model-problem cell; the grid defaults to a tiny oracle-sized one."""

    problem: ProblemConfig = Field(
        default_factory=lambda: ProblemConfig(H=0.5, H_over_h=4, inclusions_per_edge=1, channel_len=1, contrast=1e4)
    )
    coarse_space: CoarseKind = "gdsw"
    overlap: int = Field(default=2, ge=0)
    eps: float = Field(default=DEFAULT_EPS, gt=0, lt=1)
    estimator: bool = True
    check_ritz: bool = False


class SolveResponse(BaseModel):
    n: int
    n_sub: int
    coarse_space: str
    coarse_dim: int
    m: int
    status: str
    m1: Optional[int] = None
    ms_converged: Optional[int] = None
    ms_early: Optional[int] = None
    i_early: Optional[int] = None
    kappa: Optional[float] = None
    kappa_source: str
    confidence_label: str = ""
    bound_report: Optional[Dict[str, Any]] = None
    ritz_check: Optional[Dict[str, Any]] = None
    wall_time_s: float
