from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from src.linalg.dense import DenseFactor, Factor, factorize
from src.linalg.sparse import as_sparse, submatrix
from src.schwarz.coarse import CoarseKind, CoarseSpace, build_gdsw, build_rgdsw
from src.schwarz.decomposition import DomainDecomposition
from src.utils.config import DEFAULT_DENSE_FACTOR_LIMIT
from src.utils.errors import DimensionMismatchError
from src.utils.logger import get_logger

logger = get_logger("SCHWARZ")

# Above this many subdomains the local problems use sparse LU instead of
# dense Cholesky (memory: n_sub^2 dense factors of (H/h + 2*overlap)^2).
LOCAL_DENSE_MAX_SUBDOMAINS = 256


@dataclass(frozen=True, eq=False)
class PreconditionerAssembly:
    """
    Two-level additive Schwarz

        M^-1 r = Phi A0^-1 Phi^T r + sum_i R_i^T A_i^-1 R_i r

    with A_i = R_i A R_i^T on the overlapping subdomains. Without a coarse
    space the first term is dropped (one-level).
    """

    dd: DomainDecomposition
    local_factors: List[Factor]
    coarse: Optional[CoarseSpace]
    coarse_factor: Optional[Factor]
    n: int

    @property
    def kind(self) -> CoarseKind:
        return self.coarse.kind if self.coarse is not None else "none"

    def apply(self, r: np.ndarray) -> np.ndarray:
        """r may be a single vector or an (n, k) block of vectors."""
        r = np.asarray(r, dtype=np.float64)
        if r.shape[0] != self.n:
            raise DimensionMismatchError(f"apply: operand has {r.shape[0]} rows, preconditioner is {self.n}")
        z = np.zeros_like(r)
        # fixed subdomain order keeps the sum reproducible
        for idx, F in zip(self.dd.overlapping, self.local_factors):
            z[idx] += F.solve(r[idx])
        if self.coarse is not None and self.coarse_factor is not None:
            Phi = self.coarse.Phi
            z += Phi @ self.coarse_factor.solve(Phi.T @ r)
        return z

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.apply(r)

    def dense_inverse(self) -> np.ndarray:
        """
        M^-1 as a dense matrix, symmetric by construction: every Cholesky-factored
        term enters as W^T W with W = L^-1 R. Sparse LU terms are applied to the
        identity and symmetrized.
        """
        Minv = np.zeros((self.n, self.n))
        for idx, F in zip(self.dd.overlapping, self.local_factors):
            Minv[np.ix_(idx, idx)] += _gram_inverse(F, np.eye(F.n))
        if self.coarse is not None and self.coarse_factor is not None:
            Minv += _gram_inverse(self.coarse_factor, self.coarse.Phi.T.toarray())
        return Minv


def _gram_inverse(F: Factor, R: np.ndarray) -> np.ndarray:
    """R^T F^-1 R for a factored SPD matrix F."""
    if isinstance(F, DenseFactor):
        W = sla.solve_triangular(F.lower, R, lower=True, check_finite=False)
        return W.T @ W
    X = R.T @ F.solve(R)
    return 0.5 * (X + X.T)


def build_coarse_space(A: sp.spmatrix, dd: DomainDecomposition, kind: CoarseKind) -> Optional[CoarseSpace]:
    if kind == "gdsw":
        return build_gdsw(A, dd)
    if kind == "rgdsw":
        return build_rgdsw(A, dd)
    if kind == "none":
        return None
    raise ValueError(f"unknown coarse space {kind!r}")


def build_preconditioner(
    A: sp.spmatrix,
    dd: DomainDecomposition,
    kind: CoarseKind = "gdsw",
    dense_limit: int = DEFAULT_DENSE_FACTOR_LIMIT,
) -> PreconditionerAssembly:
    """Factor every overlapping local problem and the coarse matrix."""
    A = as_sparse(A)
    n = A.shape[0]
    if n != dd.owner.size:
        raise DimensionMismatchError(f"matrix has {n} unknowns, decomposition covers {dd.owner.size}")

    local_limit = dense_limit if dd.n_subdomains <= LOCAL_DENSE_MAX_SUBDOMAINS else 0
    local_factors: List[Factor] = [
        factorize(submatrix(A, idx, idx), dense_limit=local_limit) for idx in dd.overlapping
    ]

    coarse = build_coarse_space(A, dd, kind)
    coarse_factor = factorize(coarse.A0, dense_limit=dense_limit) if coarse is not None else None

    logger.info(
        "%s preconditioner: %d subdomains, overlap %d, coarse dim %d",
        kind.upper(),
        dd.n_subdomains,
        dd.overlap,
        coarse.dim if coarse is not None else 0,
    )
    return PreconditionerAssembly(
        dd=dd,
        local_factors=local_factors,
        coarse=coarse,
        coarse_factor=coarse_factor,
        n=n,
    )
