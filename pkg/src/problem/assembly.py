from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.linalg.dense import factorize
from src.linalg.sparse import as_sparse, spmv
from src.problem.grid import CoefficientField, GridSpec, InclusionPattern, build_coefficient_field
from src.utils.config import DEFAULT_DENSE_FACTOR_LIMIT, ProblemConfig
from src.utils.logger import get_logger

logger = get_logger("ASSEMBLY")

# Q1 stiffness of -div(grad) on a square element, nodes counterclockwise from
# the lower-left corner. Independent of h in two dimensions.
Q1_STIFFNESS = np.array(
    [
        [4.0, -1.0, -2.0, -1.0],
        [-1.0, 4.0, -1.0, -2.0],
        [-2.0, -1.0, 4.0, -1.0],
        [-1.0, -2.0, -1.0, 4.0],
    ]
) / 6.0


@dataclass(frozen=True, eq=False)
class DiscreteProblem:
    """
    A u = b on the interior nodes, boundary values eliminated.

    Unknown k sits at node (node_i[k], node_j[k]); the map is lexicographic,
    x fastest.
    """

    grid: GridSpec
    field: CoefficientField
    A: sp.csr_matrix
    b: np.ndarray
    node_i: np.ndarray
    node_j: np.ndarray

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    def node_index(self, i: int, j: int) -> int:
        return self.grid.interior_index(i, j)


def _element_connectivity(N: int) -> np.ndarray:
    """(N*N, 4) global node ids per element, elements ordered ey-major."""
    ey, ex = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    ex = ex.ravel()
    ey = ey.ravel()
    stride = N + 1
    n00 = ey * stride + ex
    return np.stack([n00, n00 + 1, n00 + stride + 1, n00 + stride], axis=1)


def assemble(
    grid: GridSpec,
    field: CoefficientField,
    f: float = 1.0,
    bc: float = 0.0,
) -> DiscreteProblem:
    """
    Bilinear finite elements for -div(C grad u) = f on the unit square with
    u = bc on the boundary. C is constant per element, f and bc are constants.
    """
    if field.grid != grid:
        raise ValueError("coefficient field was built for a different grid")
    N = grid.N
    n_nodes = (N + 1) ** 2
    conn = _element_connectivity(N)
    coeff = field.values.ravel()

    rows = np.repeat(conn, 4, axis=1).ravel()
    cols = np.tile(conn, (1, 4)).ravel()
    vals = (coeff[:, None] * Q1_STIFFNESS.ravel()[None, :]).ravel()
    K = sp.coo_matrix((vals, (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()

    load = np.zeros(n_nodes)
    np.add.at(load, conn.ravel(), f * grid.h**2 / 4.0)

    nodes_j, nodes_i = np.divmod(np.arange(n_nodes), N + 1)
    interior_mask = (nodes_i > 0) & (nodes_i < N) & (nodes_j > 0) & (nodes_j < N)
    interior = np.flatnonzero(interior_mask)
    boundary = np.flatnonzero(~interior_mask)

    K_rows = K[interior]
    A = as_sparse(K_rows[:, interior])
    b = load[interior].copy()
    if bc != 0.0:
        b -= spmv(K_rows[:, boundary], np.full(boundary.size, bc))

    logger.debug("assembled n=%d nnz=%d (N=%d)", A.shape[0], A.nnz, N)
    return DiscreteProblem(
        grid=grid,
        field=field,
        A=A,
        b=b,
        node_i=nodes_i[interior],
        node_j=nodes_j[interior],
    )


def build_problem(cfg: ProblemConfig) -> DiscreteProblem:
    grid = GridSpec(n_sub=cfg.n_sub, h_ratio=cfg.H_over_h)
    field = build_coefficient_field(grid, InclusionPattern.from_config(cfg))
    return assemble(grid, field, f=cfg.f, bc=cfg.bc)


def direct_solve(
    problem: DiscreteProblem,
    b: Optional[np.ndarray] = None,
    dense_limit: int = DEFAULT_DENSE_FACTOR_LIMIT,
) -> np.ndarray:
    """Reference solution u* of A u = b (problem.b by default)."""
    rhs = problem.b if b is None else np.asarray(b, dtype=np.float64)
    if not np.any(rhs):
        return np.zeros(problem.n)
    return factorize(problem.A, dense_limit=dense_limit).solve(rhs)
