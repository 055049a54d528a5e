import math

import numpy as np

from src.bounds.spectrum import Spectrum
from src.krylov.trace import CGTrace
from src.linalg.tridiagonal import SymTridiagonal, tridiag_eigenvalues
from src.utils.errors import NotPositiveDefiniteError


def lanczos_tridiagonal(trace: CGTrace) -> SymTridiagonal:
    """
    The m x m Lanczos matrix hidden in m CG steps:

        T[0, 0] = 1/alpha_0
        T[j, j] = 1/alpha_j + beta_{j-1}/alpha_{j-1}
        T[j, j+1] = sqrt(beta_j)/alpha_j
    """
    m = trace.m
    if m == 0:
        raise ValueError("lanczos_tridiagonal needs a trace with at least one iteration")
    alpha = np.asarray(trace.alphas[:m], dtype=np.float64)
    beta = np.asarray(trace.betas[:m], dtype=np.float64)

    diag = 1.0 / alpha
    diag[1:] += beta[: m - 1] / alpha[: m - 1]
    off = np.sqrt(beta[: m - 1]) / alpha[: m - 1]
    return SymTridiagonal(diag=diag, offdiag=off)


def ritz_values(trace: CGTrace) -> Spectrum:
    """Eigenvalues of the Lanczos matrix, ascending, as a Spectrum."""
    values = tridiag_eigenvalues(lanczos_tridiagonal(trace))
    if values[0] <= 0.0 or not math.isfinite(values[-1]):
        raise NotPositiveDefiniteError(
            f"non-positive Ritz value {values[0]:.3e}: operator or preconditioner is not SPD"
        )
    return Spectrum(values)
