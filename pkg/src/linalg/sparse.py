from typing import Union

import numpy as np
import scipy.sparse as sp

from src.utils.errors import DimensionMismatchError

# Compressed row storage is scipy's CSR: indptr (row offsets), indices, data.
SparseMatrix = sp.csr_matrix

SYMMETRY_RTOL = 1e-12


def as_sparse(M: Union[np.ndarray, sp.spmatrix]) -> sp.csr_matrix:
    """
    Canonical CSR copy: float64, duplicates summed, column indices strictly
    increasing within each row, explicit zeros dropped.
    """
    A = sp.csr_matrix(M, dtype=np.float64, copy=True)
    A.sum_duplicates()
    A.eliminate_zeros()
    A.sort_indices()
    return A


def is_symmetric(A: sp.spmatrix, rtol: float = SYMMETRY_RTOL) -> bool:
    if A.shape[0] != A.shape[1]:
        return False
    scale = abs(A).max() if A.nnz else 0.0
    if scale == 0.0:
        return True
    diff = (A - A.T).tocsr()
    diff.eliminate_zeros()
    if diff.nnz == 0:
        return True
    return bool(abs(diff).max() <= rtol * scale)


def spmv(A: sp.spmatrix, x: np.ndarray) -> np.ndarray:
    """y = A x; x may be a vector or an (n_cols, k) block."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != A.shape[1]:
        raise DimensionMismatchError(
            f"spmv: operand has {x.shape[0]} rows, matrix has {A.shape[1]} columns"
        )
    return np.asarray(A @ x)


def submatrix(A: sp.csr_matrix, rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
    """A[rows][:, cols] kept canonical (sorted indices)."""
    S = A[rows][:, cols].tocsr()
    S.sort_indices()
    return S
