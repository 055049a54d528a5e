from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

from src.utils.config import DEFAULT_EPS, StopConfig
from src.utils.helpers import fmt17, write_csv

StopMode = Literal["residual", "anorm"]
Status = Literal["running", "converged", "max_iterations", "stopped_by_observer"]

TRACE_CSV_FIELDS = ["iter", "alpha", "beta", "resnorm", "anorm_err"]


@dataclass(frozen=True)
class StopRule:
    """
    When to stop PCG.

    residual: sqrt(r.z) / sqrt(r0.z0) <= eps (preconditioned residual).
    anorm:    ||x - x*||_A / ||x0 - x*||_A <= eps, needs a reference solution.
    """

    mode: StopMode = "residual"
    eps: float = DEFAULT_EPS
    max_iter: int = 5000

    def __post_init__(self) -> None:
        if self.mode not in ("residual", "anorm"):
            raise ValueError(f"unknown stop mode {self.mode!r}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.max_iter <= 0:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")

    @classmethod
    def from_config(cls, cfg: StopConfig) -> "StopRule":
        return cls(mode=cfg.mode, eps=cfg.eps, max_iter=cfg.max_iter)


@dataclass
class CGTrace:
    """
    Per-iteration CG scalars. Entry j belongs to iteration j+1: alpha_j is its
    step length, beta_j the coefficient of the next search direction, and
    resnorms/errors are relative to the initial values after that iteration.
    """

    alphas: List[float] = field(default_factory=list)
    betas: List[float] = field(default_factory=list)
    resnorms: List[float] = field(default_factory=list)
    errors: Optional[List[float]] = None
    status: Status = "running"

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def record(self, alpha: float, beta: float, resnorm: float, error: Optional[float] = None) -> None:
        self.alphas.append(float(alpha))
        self.betas.append(float(beta))
        self.resnorms.append(float(resnorm))
        if error is not None:
            if self.errors is None:
                self.errors = []
            self.errors.append(float(error))

    def prefix(self, i: int) -> "CGTrace":
        """The first i iterations as a standalone trace."""
        if not 0 <= i <= self.m:
            raise ValueError(f"prefix length {i} outside [0, {self.m}]")
        return CGTrace(
            alphas=self.alphas[:i],
            betas=self.betas[:i],
            resnorms=self.resnorms[:i],
            errors=None if self.errors is None else self.errors[:i],
            status=self.status if i == self.m else "running",
        )

    def rows(self) -> List[Dict[str, Any]]:
        out: List[Dict[str, Any]] = []
        for j in range(self.m):
            out.append(
                {
                    "iter": j + 1,
                    "alpha": fmt17(self.alphas[j]),
                    "beta": fmt17(self.betas[j]),
                    "resnorm": fmt17(self.resnorms[j]),
                    "anorm_err": fmt17(self.errors[j]) if self.errors else "",
                }
            )
        return out

    def summary(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "status": self.status,
            "final_resnorm": self.resnorms[-1] if self.resnorms else None,
            "final_anorm_err": self.errors[-1] if self.errors else None,
        }


def write_trace_csv(trace: CGTrace, path: str) -> None:
    write_csv(trace.rows(), path, fieldnames=TRACE_CSV_FIELDS)
