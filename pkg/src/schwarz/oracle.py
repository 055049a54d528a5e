from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from src.bounds.spectrum import Spectrum
from src.linalg.dense import dense_sym_eigen
from src.utils.config import DEFAULT_ORACLE_CAP
from src.utils.errors import NotPositiveDefiniteError, OracleCapExceededError
from src.utils.logger import get_logger

logger = get_logger("ORACLE")

ASYMMETRY_RTOL = 1e-10


def dense_preconditioner(apply: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """
    M^-1 as a dense matrix. Uses the operator's own dense_inverse() when it has
    one (exactly symmetric), otherwise applies it to the identity block.
    """
    dense = getattr(apply, "dense_inverse", None)
    if callable(dense):
        return np.asarray(dense())
    return np.asarray(apply(np.eye(n)))


def spectrum_oracle(
    A: sp.spmatrix,
    apply: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Spectrum:
    """
    Exact spectrum of M^-1 A through a symmetric form.

    M^-1 = Q L Q^T gives K = Q L^(1/2) and K^T A K, similar to M^-1 A, so a
    symmetric eigensolver suffices. Refuses above `cap` unknowns.
    """
    n = A.shape[0]
    if n > cap:
        raise OracleCapExceededError(n, cap)
    A_dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)

    if apply is None:
        values, _ = dense_sym_eigen(A_dense, cap=cap)
    else:
        Minv = dense_preconditioner(apply, n)
        scale = max(float(np.max(np.abs(Minv))), 1e-300)
        asym = float(np.max(np.abs(Minv - Minv.T)))
        if asym > ASYMMETRY_RTOL * scale:
            raise NotPositiveDefiniteError(f"preconditioner is not symmetric (relative asymmetry {asym / scale:.3e})")
        w, Q = np.linalg.eigh(0.5 * (Minv + Minv.T))
        if w[0] <= 0.0:
            raise NotPositiveDefiniteError(f"preconditioner is not positive definite (min eigenvalue {w[0]:.3e})")
        K = Q * np.sqrt(w)
        S = K.T @ A_dense @ K
        values, _ = dense_sym_eigen(0.5 * (S + S.T), cap=cap)

    if values[0] <= 0.0:
        raise NotPositiveDefiniteError(f"preconditioned operator has eigenvalue {values[0]:.3e} <= 0")
    logger.info("oracle spectrum n=%d: [%.6e, %.6e], kappa=%.3e", n, values[0], values[-1], values[-1] / values[0])
    return Spectrum(values)
