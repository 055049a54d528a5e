from src.linalg.dense import (
    DenseFactor,
    SparseFactor,
    cholesky_factor,
    cholesky_solve,
    dense_sym_eigen,
    factorize,
    householder_tridiagonalize,
)
from src.linalg.mmio import read_matrix, read_vector, write_matrix, write_vector
from src.linalg.sparse import SparseMatrix, as_sparse, is_symmetric, spmv, submatrix
from src.linalg.tridiagonal import SymTridiagonal, tridiag_eigenvalues

__all__ = [
    "DenseFactor",
    "SparseFactor",
    "SparseMatrix",
    "SymTridiagonal",
    "as_sparse",
    "cholesky_factor",
    "cholesky_solve",
    "dense_sym_eigen",
    "factorize",
    "householder_tridiagonalize",
    "is_symmetric",
    "read_matrix",
    "read_vector",
    "spmv",
    "submatrix",
    "tridiag_eigenvalues",
    "write_matrix",
    "write_vector",
]
