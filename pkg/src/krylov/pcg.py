import math
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.krylov.trace import CGTrace, StopRule
from src.linalg.sparse import spmv
from src.utils.errors import DimensionMismatchError, NotPositiveDefiniteError
from src.utils.logger import get_logger

logger = get_logger("PCG")

Preconditioner = Callable[[np.ndarray], np.ndarray]
Observer = Callable[[CGTrace], Optional[bool]]


def _identity(r: np.ndarray) -> np.ndarray:
    return r.copy()


def _anorm(A: sp.spmatrix, e: np.ndarray) -> float:
    return math.sqrt(max(float(e @ spmv(A, e)), 0.0))


def pcg(
    A: sp.spmatrix,
    b: np.ndarray,
    M: Optional[Preconditioner] = None,
    stop: Optional[StopRule] = None,
    x0: Optional[np.ndarray] = None,
    observer: Optional[Observer] = None,
    x_ref: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, CGTrace]:
    """
    Preconditioned conjugate gradients with the CG scalars recorded.

    Args:
        A: SPD system matrix.
        b: right-hand side.
        M: preconditioner application r -> M^-1 r (identity when None).
        stop: stopping rule; relative preconditioned residual by default.
        x0: initial guess (zero when None).
        observer: called with the running trace after every iteration;
            returning True ends the run with status "stopped_by_observer".
        x_ref: reference solution; enables the A-norm error history and is
            required for stop.mode == "anorm".

    Returns:
        (x, trace). Hitting max_iter is a status on the trace, not an error.
        Non-positive curvature raises NotPositiveDefiniteError.
    """
    stop = stop or StopRule()
    M = M or _identity
    n = A.shape[0]
    b = np.asarray(b, dtype=np.float64)
    if A.shape[1] != n or b.shape != (n,):
        raise DimensionMismatchError(f"pcg: A is {A.shape}, b has shape {b.shape}")
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    if x.shape != (n,):
        raise DimensionMismatchError(f"pcg: x0 has shape {x.shape}, expected ({n},)")
    if x_ref is not None:
        x_ref = np.asarray(x_ref, dtype=np.float64)
        if x_ref.shape != (n,):
            raise DimensionMismatchError(f"pcg: x_ref has shape {x_ref.shape}, expected ({n},)")
    if stop.mode == "anorm" and x_ref is None:
        raise ValueError("A-norm error stopping needs a reference solution x_ref")

    trace = CGTrace(errors=[] if x_ref is not None else None)

    if not np.any(b):
        trace.status = "converged"
        return x, trace

    r = b - spmv(A, x)
    z = M(r)
    rz = float(r @ z)
    if rz < 0.0:
        raise NotPositiveDefiniteError(f"preconditioner is not positive definite (r.Mr = {rz:.3e})")
    res0 = math.sqrt(rz)
    err0 = _anorm(A, x - x_ref) if x_ref is not None else None

    initial = err0 if stop.mode == "anorm" else res0
    if initial == 0.0:
        trace.status = "converged"
        return x, trace

    p = z.copy()
    for _ in range(stop.max_iter):
        Ap = spmv(A, p)
        pAp = float(p @ Ap)
        if pAp <= 0.0:
            raise NotPositiveDefiniteError(
                f"PCG breakdown at iteration {trace.m + 1}: p.Ap = {pAp:.3e}"
            )
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = M(r)
        rz_new = float(r @ z)
        if rz_new < 0.0:
            raise NotPositiveDefiniteError(
                f"preconditioner is not positive definite at iteration {trace.m + 1}"
            )
        beta = rz_new / rz

        rel_res = math.sqrt(rz_new) / res0
        rel_err: Optional[float] = None
        if x_ref is not None:
            rel_err = _anorm(A, x - x_ref) / err0 if err0 else 0.0
        trace.record(alpha, beta, rel_res, rel_err)

        halt = bool(observer(trace)) if observer is not None else False
        measure = rel_err if stop.mode == "anorm" else rel_res
        if measure <= stop.eps:
            trace.status = "converged"
            break
        if halt:
            trace.status = "stopped_by_observer"
            break

        p = z + beta * p
        rz = rz_new
    else:
        trace.status = "max_iterations"
        logger.warning("no convergence after %d iterations (resnorm %.3e)", trace.m, trace.resnorms[-1])

    logger.debug("finished: m=%d status=%s", trace.m, trace.status)
    return x, trace
