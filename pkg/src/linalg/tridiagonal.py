import math
from dataclasses import dataclass, field

import numpy as np

from src.utils.errors import ConvergenceError, DimensionMismatchError

# Iteration cap per eigenvalue for the implicit QL sweep.
QL_ITERATIONS_PER_VALUE = 50


@dataclass(frozen=True, eq=False)
class SymTridiagonal:
    """Symmetric tridiagonal matrix: diagonal d_1..d_m, off-diagonal e_1..e_{m-1}."""

    diag: np.ndarray
    offdiag: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        d = np.asarray(self.diag, dtype=np.float64).reshape(-1)
        e = np.asarray(self.offdiag, dtype=np.float64).reshape(-1)
        if d.size == 0:
            raise DimensionMismatchError("SymTridiagonal needs at least one diagonal entry")
        if e.size != d.size - 1:
            raise DimensionMismatchError(
                f"off-diagonal length {e.size} does not match diagonal length {d.size} - 1"
            )
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def m(self) -> int:
        return int(self.diag.size)

    def trace(self) -> float:
        return float(np.sum(self.diag))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def tridiag_eigenvalues(T: SymTridiagonal) -> np.ndarray:
    """
    All eigenvalues of T, ascending, by implicit-shift QL with Wilkinson shifts.

    Eigenvalues only (no rotations accumulated). Raises ConvergenceError when the
    total number of QL sweeps exceeds 50*m.
    """
    d = T.diag.copy()
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = T.offdiag
    cap = QL_ITERATIONS_PER_VALUE * n
    sweeps = 0
    eps = np.finfo(np.float64).eps

    for l in range(n):
        while True:
            # look for a negligible off-diagonal element to split the matrix
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break

            sweeps += 1
            if sweeps > cap:
                raise ConvergenceError(f"tridiagonal QL did not converge within {cap} sweeps (m={n})")

            # shift from the leading 2x2 block, the root closer to d[l]
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    return np.sort(d)
