from dataclasses import dataclass
from typing import Protocol, Tuple, Union

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.linalg.tridiagonal import SymTridiagonal
from src.utils.config import DEFAULT_DENSE_FACTOR_LIMIT, DEFAULT_ORACLE_CAP
from src.utils.errors import (
    ConvergenceError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
    OracleCapExceededError,
)

MatrixLike = Union[np.ndarray, sp.spmatrix]

EIGEN_RESIDUAL_RTOL = 1e-8
SYMMETRY_RTOL = 1e-10


def _to_dense(M: MatrixLike) -> np.ndarray:
    if sp.issparse(M):
        return M.toarray().astype(np.float64)
    return np.array(M, dtype=np.float64, copy=True)


def _check_square(M: np.ndarray) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {M.shape}")


def _check_symmetric(M: np.ndarray, rtol: float = SYMMETRY_RTOL) -> None:
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > rtol * max(scale, 1e-300):
        raise NotPositiveDefiniteError(
            f"matrix is not symmetric (max |M - M^T| = {asym:.3e}, scale {scale:.3e})"
        )


# ---------------------------------------------------------------------
# Factorizations
# ---------------------------------------------------------------------


class Factor(Protocol):
    n: int

    def solve(self, b: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class DenseFactor:
    """Lower Cholesky factor L with M = L L^T."""

    lower: np.ndarray
    n: int
    kind: str = "cholesky"

    def solve(self, b: np.ndarray) -> np.ndarray:
        return cholesky_solve(self, b)

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T


@dataclass(frozen=True, eq=False)
class SparseFactor:
    """Sparse LU in symmetric mode; used above the dense factor limit."""

    lu: spla.SuperLU
    n: int
    kind: str = "sparse_lu"

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.n:
            raise DimensionMismatchError(f"solve: rhs has {b.shape[0]} rows, factor is {self.n}")
        return self.lu.solve(b)


def cholesky_factor(M: MatrixLike) -> DenseFactor:
    """Dense Cholesky of an SPD matrix; a non-positive pivot raises NotPositiveDefiniteError."""
    D = _to_dense(M)
    _check_square(D)
    _check_symmetric(D)
    try:
        L = sla.cholesky(D, lower=True, check_finite=True)
    except sla.LinAlgError as e:
        raise NotPositiveDefiniteError(f"Cholesky failed, non-positive pivot: {e}") from e
    return DenseFactor(lower=L, n=D.shape[0])


def cholesky_solve(F: DenseFactor, b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != F.n:
        raise DimensionMismatchError(f"cholesky_solve: rhs has {b.shape[0]} rows, factor is {F.n}")
    if F.n == 0:
        return b.copy()
    return sla.cho_solve((F.lower, True), b, check_finite=False)


def sparse_factor(M: sp.spmatrix) -> SparseFactor:
    A = sp.csc_matrix(M, dtype=np.float64)
    try:
        lu = spla.splu(
            A,
            permc_spec="MMD_AT_PLUS_A",
            diag_pivot_thresh=0.0,
            options={"SymmetricMode": True},
        )
    except RuntimeError as e:
        raise NotPositiveDefiniteError(f"sparse factorization failed: {e}") from e
    if np.any(lu.U.diagonal() <= 0.0):
        raise NotPositiveDefiniteError("sparse factorization hit a non-positive pivot")
    return SparseFactor(lu=lu, n=A.shape[0])


def factorize(M: MatrixLike, dense_limit: int = DEFAULT_DENSE_FACTOR_LIMIT) -> Factor:
    """Dense Cholesky up to `dense_limit` unknowns, sparse LU beyond."""
    n = M.shape[0]
    if n <= dense_limit or not sp.issparse(M):
        return cholesky_factor(M)
    return sparse_factor(M)


# ---------------------------------------------------------------------
# Dense symmetric eigensolution (oracle)
# ---------------------------------------------------------------------


def dense_sym_eigen(
    M: MatrixLike,
    cap: int = DEFAULT_ORACLE_CAP,
    check_residual: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    All eigenpairs of a symmetric matrix, ascending.

    Refuses above `cap` (desk-scale oracle only). Every pair satisfies
    ||M v - lambda v|| <= 1e-8 ||M||.
    """
    n = M.shape[0]
    if n > cap:
        raise OracleCapExceededError(n, cap)
    D = _to_dense(M)
    _check_square(D)
    _check_symmetric(D)
    w, V = np.linalg.eigh(D)
    if check_residual and n:
        norm = max(float(np.max(np.abs(w))), 1e-300)
        res = np.linalg.norm(D @ V - V * w, axis=0)
        worst = float(np.max(res))
        if worst > EIGEN_RESIDUAL_RTOL * norm:
            raise ConvergenceError(f"eigenpair residual {worst:.3e} exceeds {EIGEN_RESIDUAL_RTOL}*||M||")
    return w, V


def householder_tridiagonalize(M: MatrixLike) -> SymTridiagonal:
    """
    Orthogonal similarity reduction Q^T M Q = T of a symmetric matrix.

    Reflector k zeroes column k below the subdiagonal; the rank-2 update is
    applied to the trailing block only.
    """
    a = _to_dense(M)
    _check_square(a)
    _check_symmetric(a)
    n = a.shape[0]
    off = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        u = a[k + 1 :, k].copy()
        u_mag = float(np.linalg.norm(u))
        if u_mag == 0.0:
            off[k] = 0.0
            continue
        if u[0] < 0.0:
            u_mag = -u_mag
        u[0] += u_mag
        h = float(u @ u) / 2.0
        v = a[k + 1 :, k + 1 :] @ u / h
        g = float(u @ v) / (2.0 * h)
        v = v - g * u
        a[k + 1 :, k + 1 :] -= np.outer(v, u) + np.outer(u, v)
        off[k] = -u_mag
    if n >= 2:
        off[n - 2] = a[n - 1, n - 2]
    return SymTridiagonal(diag=np.diag(a).copy(), offdiag=off)
