import os
import sys
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp

# Add project root so `import src...` works
ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

os.environ.setdefault("CLUSTERBOUND_LOG_LEVEL", "WARNING")

from src.bounds.spectrum import Spectrum  # noqa: E402
from src.problem.assembly import assemble  # noqa: E402
from src.problem.grid import GridSpec, InclusionPattern, build_coefficient_field  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_spd(n: int, rng: np.random.Generator, cond: float = 100.0) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = np.geomspace(1.0, cond, n)
    M = (Q * w) @ Q.T
    return (M + M.T) / 2.0


def two_cluster_spectrum(n_each: int = 10) -> Spectrum:
    low = np.linspace(1.0, 2.0, n_each)
    high = np.linspace(1e6, 2e6, n_each)
    return Spectrum(np.concatenate([low, high]))


def small_problem(n_sub: int = 2, h_ratio: int = 4, contrast: float = 1e4, inclusions: int = 1):
    """Oracle-sized model problem: channels of half length 1 across each interface."""
    grid = GridSpec(n_sub=n_sub, h_ratio=h_ratio)
    pattern = InclusionPattern(inclusions_per_edge=inclusions, half_length=1, width=1, contrast=contrast)
    return assemble(grid, build_coefficient_field(grid, pattern))


def poisson_problem(n_sub: int, h_ratio: int):
    grid = GridSpec(n_sub=n_sub, h_ratio=h_ratio)
    return assemble(grid, build_coefficient_field(grid, InclusionPattern(inclusions_per_edge=0)))


def diag(values) -> sp.csr_matrix:
    return sp.diags(np.asarray(values, dtype=np.float64), format="csr")
