"""
Converged extreme Ritz values of a preconditioned operator.

A production solve stops at the requested tolerance, which leaves the
extreme Ritz values short of the spectrum edges whenever the right-hand side
is poor in the extreme eigenvectors (f = 1 on a symmetric grid is). Here PCG
runs on a seeded random right-hand side until lambda_min and lambda_max of
the Lanczos matrix stop moving.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.bounds.spectrum import Spectrum
from src.krylov.lanczos import ritz_values
from src.krylov.pcg import Preconditioner, pcg
from src.krylov.trace import CGTrace, StopRule
from src.utils.errors import ConvergenceError, NotPositiveDefiniteError
from src.utils.logger import get_logger

logger = get_logger("RITZ")

EXTREMES_EPS = 1e-15


class RitzExtremesObserver:
    """Stops PCG once both extreme Ritz values change by at most rtol over `every` iterations."""

    def __init__(self, rtol: float = 1e-13, every: int = 10) -> None:
        if rtol <= 0.0:
            raise ValueError(f"rtol must be > 0, got {rtol}")
        if every < 1:
            raise ValueError(f"every must be >= 1, got {every}")
        self.rtol = rtol
        self.every = every
        self.extremes: Optional[Tuple[float, float]] = None
        self.iteration = 0
        self.stable = False

    def __call__(self, trace: CGTrace) -> bool:
        if trace.m % self.every != 0:
            return False
        try:
            spec = ritz_values(trace)
        except (NotPositiveDefiniteError, ConvergenceError) as e:
            logger.warning("Ritz values unavailable at i=%d: %s", trace.m, e)
            return False
        current = (spec.lam(1), spec.lam(spec.n))
        previous, self.extremes, self.iteration = self.extremes, current, trace.m
        if previous is None:
            return False
        self.stable = all(abs(c - p) <= self.rtol * abs(c) for p, c in zip(previous, current))
        return self.stable


@dataclass
class RitzExtremes:
    lam_min: float
    lam_max: float
    iterations: int
    stable: bool
    oracle_min: Optional[float] = None
    oracle_max: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def rel_err_min(self) -> Optional[float]:
        return None if self.oracle_min is None else abs(self.lam_min - self.oracle_min) / self.oracle_min

    @property
    def rel_err_max(self) -> Optional[float]:
        return None if self.oracle_max is None else abs(self.lam_max - self.oracle_max) / self.oracle_max

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lam_min": self.lam_min,
            "lam_max": self.lam_max,
            "iterations": self.iterations,
            "stable": self.stable,
            "oracle_min": self.oracle_min,
            "oracle_max": self.oracle_max,
            "rel_err_min": self.rel_err_min,
            "rel_err_max": self.rel_err_max,
            **self.extra,
        }


def converge_ritz_extremes(
    A: sp.spmatrix,
    M: Optional[Preconditioner] = None,
    seed: int = 0,
    rtol: float = 1e-13,
    every: int = 10,
    max_iter: Optional[int] = None,
    oracle: Optional[Spectrum] = None,
) -> RitzExtremes:
    """
    Extreme Ritz values of M^-1 A from a run on a seeded random right-hand side.

    The run ends when the extremes are stable to rtol, when the relative
    residual reaches 1e-15, or after max_iter (10 n by default) iterations.
    Passing the oracle spectrum fills in the relative errors.
    """
    n = A.shape[0]
    b = np.random.default_rng(seed).standard_normal(n)
    observer = RitzExtremesObserver(rtol=rtol, every=every)
    stop = StopRule(mode="residual", eps=EXTREMES_EPS, max_iter=max_iter or max(100, 10 * n))
    _, trace = pcg(A, b, M, stop=stop, observer=observer)
    if trace.m == 0:
        raise ConvergenceError("no PCG iterations to take Ritz values from")

    spec = ritz_values(trace)
    result = RitzExtremes(
        lam_min=spec.lam(1),
        lam_max=spec.lam(spec.n),
        iterations=trace.m,
        stable=observer.stable or trace.converged,
        oracle_min=None if oracle is None else oracle.lam(1),
        oracle_max=None if oracle is None else oracle.lam(oracle.n),
        extra={"status": trace.status, "seed": seed},
    )
    if not result.stable:
        logger.warning("extreme Ritz values not stable after %d iterations", trace.m)
    if oracle is not None:
        logger.info(
            "Ritz extremes vs oracle: rel_err_min=%.3e rel_err_max=%.3e after %d iterations",
            result.rel_err_min,
            result.rel_err_max,
            trace.m,
        )
    return result
