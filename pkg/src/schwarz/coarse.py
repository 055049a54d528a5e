from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp

from src.linalg.dense import cholesky_factor
from src.linalg.mmio import write_matrix
from src.linalg.sparse import as_sparse, submatrix
from src.schwarz.decomposition import DomainDecomposition
from src.utils.config import CoarseKind
from src.utils.errors import DecompositionError
from src.utils.logger import get_logger

logger = get_logger("COARSE")


# entries below this (relative to 1) are dropped from the extended basis
BASIS_DROP_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class CoarseSpace:
    """Prolongation Phi (n x n_coarse) and Galerkin matrix A0 = Phi^T A Phi."""

    kind: CoarseKind
    Phi: sp.csr_matrix
    A0: sp.csr_matrix

    @property
    def dim(self) -> int:
        return int(self.Phi.shape[1])

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.Phi.sum(axis=1)).ravel()


def _interface_values(dd: DomainDecomposition, kind: CoarseKind) -> Tuple[List[int], List[int], List[float], int]:
    """COO triplets of Phi restricted to the interface, plus the coarse dimension."""
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []

    if kind == "gdsw":
        for c, comp in enumerate(dd.components):
            rows.extend(comp.nodes.tolist())
            cols.extend([c] * comp.nodes.size)
            vals.extend([1.0] * comp.nodes.size)
        return rows, cols, vals, len(dd.components)

    # rgdsw: vertex columns only; an edge node splits its unit value
    # equally among the interior vertices at the ends of its edge
    column: Dict[int, int] = {}
    for c, comp in enumerate(dd.components):
        if comp.kind == "vertex":
            column[c] = len(column)
            rows.extend(comp.nodes.tolist())
            cols.extend([column[c]] * comp.nodes.size)
            vals.extend([1.0] * comp.nodes.size)
    for comp in dd.edges:
        if not comp.ancestors:
            raise DecompositionError(f"edge {comp.key} has no interior end vertex")
        share = 1.0 / len(comp.ancestors)
        for v in comp.ancestors:
            rows.extend(comp.nodes.tolist())
            cols.extend([column[v]] * comp.nodes.size)
            vals.extend([share] * comp.nodes.size)
    return rows, cols, vals, len(column)


def _harmonic_extension(
    A: sp.csr_matrix,
    dd: DomainDecomposition,
    phi_gamma: sp.csr_matrix,
    gamma: np.ndarray,
) -> sp.csr_matrix:
    """
    Extend interface values into every subdomain interior:
    Phi_I = -A_II^{-1} A_I,Gamma Phi_Gamma, one dense Cholesky per subdomain.
    """
    n = A.shape[0]
    n_coarse = phi_gamma.shape[1]
    A_rows_gamma = A[:, gamma].tocsr()

    on_gamma = phi_gamma.tocoo()
    rows = [gamma[on_gamma.row]]
    cols = [on_gamma.col.astype(np.int64)]
    vals = [on_gamma.data]

    for interior in dd.interiors:
        if interior.size == 0:
            continue
        rhs = (A_rows_gamma[interior] @ phi_gamma).tocsc()
        active = np.flatnonzero(np.diff(rhs.indptr))
        if active.size == 0:
            continue
        F = cholesky_factor(submatrix(A, interior, interior))
        ext = -F.solve(rhs[:, active].toarray())
        r_loc, c_loc = np.nonzero(np.abs(ext) >= BASIS_DROP_TOL)
        rows.append(interior[r_loc])
        cols.append(active[c_loc])
        vals.append(ext[r_loc, c_loc])

    Phi = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n_coarse),
    )
    return as_sparse(Phi)


def _build(A: sp.spmatrix, dd: DomainDecomposition, kind: CoarseKind) -> CoarseSpace:
    if dd.grid.n_sub < 2:
        raise DecompositionError("a coarse space needs at least 2 x 2 subdomains")
    A = as_sparse(A)
    if A.shape[0] != dd.owner.size:
        raise DecompositionError(
            f"matrix has {A.shape[0]} unknowns, decomposition covers {dd.owner.size}"
        )
    gamma = dd.interface
    position = np.full(A.shape[0], -1, dtype=np.int64)
    position[gamma] = np.arange(gamma.size)

    rows, cols, vals, dim = _interface_values(dd, kind)
    phi_gamma = sp.csr_matrix(
        (np.asarray(vals), (position[np.asarray(rows, dtype=np.int64)], np.asarray(cols, dtype=np.int64))),
        shape=(gamma.size, dim),
    )
    Phi = _harmonic_extension(A, dd, phi_gamma, gamma)
    A0 = as_sparse(Phi.T @ A @ Phi)
    # symmetric by construction up to roundoff in the triple product
    A0 = as_sparse((A0 + A0.T) * 0.5)
    logger.info("%s coarse space: dim=%d, nnz(Phi)=%d", kind.upper(), dim, Phi.nnz)
    return CoarseSpace(kind=kind, Phi=Phi, A0=A0)


def build_gdsw(A: sp.spmatrix, dd: DomainDecomposition) -> CoarseSpace:
    """One basis function per vertex and per edge, discrete-harmonic inside subdomains."""
    return _build(A, dd, "gdsw")


def build_rgdsw(A: sp.spmatrix, dd: DomainDecomposition) -> CoarseSpace:
    """One basis function per interior subdomain vertex; edge values split among end vertices."""
    return _build(A, dd, "rgdsw")


def export_coarse_space(coarse: CoarseSpace, path: str) -> None:
    write_matrix(coarse.Phi, path)
