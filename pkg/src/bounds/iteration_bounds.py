import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.bounds.chebyshev import log_abs_scaled_cheb, log_growth_rate, log_inv_gamma
from src.bounds.spectrum import ClusterPartition, Spectrum

# Slack on ln(eps) when verifying a bounding polynomial.
VERIFY_SLACK = 1e-10


# ---------------------------------------------------------------------
# Classical and two-cluster bounds
# ---------------------------------------------------------------------


def m1(kappa: float, eps: float) -> int:
    """Classical bound floor(sqrt(kappa)/2 * ln(2/eps) + 1), never below 1."""
    if kappa < 1.0:
        raise ValueError(f"condition number must be >= 1, got {kappa}")
    return max(1, math.floor(math.sqrt(kappa) / 2.0 * math.log(2.0 / eps) + 1.0))


def m2(kappa: float, kappa1: float, kappa2: float, eps: float) -> int:
    """Two-cluster bound for a single spectral gap with cluster condition numbers kappa1, kappa2."""
    if kappa1 < 1.0 or kappa2 < 1.0:
        raise ValueError("cluster condition numbers must be >= 1")
    if kappa < kappa1 * kappa2 * (1.0 - 1e-12):
        raise ValueError(f"kappa={kappa} must be at least kappa1*kappa2={kappa1 * kappa2}")
    log_gap = math.log(4.0 * kappa / kappa1)
    sk1, sk2 = math.sqrt(kappa1), math.sqrt(kappa2)
    value = (
        1.0
        + sk2 / 2.0 * log_gap
        + 0.5 * math.log(2.0 / eps) * (sk1 + sk2 + math.sqrt(kappa1 * kappa2) / 2.0 * log_gap)
    )
    return max(1, math.floor(value))


# ---------------------------------------------------------------------
# Multi-cluster polynomial
# ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClusterPolynomial:
    """Product of scaled Chebyshev factors, one per cluster, with degrees p_1..p_s."""

    partition: ClusterPartition
    degrees: Tuple[int, ...]
    eps: float

    def __post_init__(self) -> None:
        if len(self.degrees) != self.partition.s:
            raise ValueError("one degree per cluster is required")
        if any(p < 0 for p in self.degrees):
            raise ValueError("degrees must be non-negative")
        object.__setattr__(self, "degrees", tuple(int(p) for p in self.degrees))

    @property
    def total_degree(self) -> int:
        return int(sum(self.degrees))

    def log_abs(self, lam: np.ndarray) -> np.ndarray:
        """ln |r_s(lam)|, summed over the cluster factors."""
        lam = np.asarray(lam, dtype=np.float64)
        total = np.zeros_like(lam)
        for iv, p in zip(self.partition.intervals, self.degrees):
            total = total + log_abs_scaled_cheb(iv, p, lam)
        return total


def cluster_degrees(spec: Spectrum, part: ClusterPartition, eps: float) -> ClusterPolynomial:
    """
    Degrees p_1..p_s fixed in cluster order.

    p_i = ceil(log_{g_i}(eps/2) + sum_{j<i} p_j * rate_j / (-ln g_i)), where
    g_i = (sqrt(k_i) - 1)/(sqrt(k_i) + 1) and rate_j is the per-degree log
    growth of cluster j's factor at the upper edge lam_{k_i}. Singleton
    clusters take degree 1; negative arguments clamp to 0.
    """
    if part.spectrum is not spec and not np.array_equal(part.spectrum.values, spec.values):
        raise ValueError("partition does not belong to this spectrum")

    intervals = part.intervals
    neg_log_half_eps = -math.log(eps / 2.0)
    degrees: List[int] = []

    for i, iv in enumerate(intervals):
        if iv.degenerate:
            degrees.append(1)
            continue
        neg_log_gamma = log_inv_gamma(iv.kappa)
        arg = neg_log_half_eps / neg_log_gamma
        for j in range(i):
            if degrees[j] == 0:
                continue
            arg += degrees[j] * log_growth_rate(intervals[j], iv.hi) / neg_log_gamma
        degrees.append(max(0, math.ceil(arg)))

    return ClusterPolynomial(partition=part, degrees=tuple(degrees), eps=eps)


def ms(poly: ClusterPolynomial) -> int:
    """Total degree of the multi-cluster polynomial."""
    return poly.total_degree


# ---------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------


@dataclass
class PolynomialCheck:
    max_log: float
    log_eps: float
    passed: bool
    edge_logs: List[float] = field(default_factory=list)
    edges_passed: bool = True

    def to_dict(self) -> dict:
        # -inf (exact annihilation) is reported as null to keep the output strict JSON
        return {
            "max_log_abs_r": _finite_or_none(self.max_log),
            "log_eps": self.log_eps,
            "passed": self.passed,
            "edge_logs": [_finite_or_none(v) for v in self.edge_logs],
            "edges_passed": self.edges_passed,
        }


def _finite_or_none(x: float) -> Optional[float]:
    return float(x) if math.isfinite(x) else None


def verify_polynomial(spec: Spectrum, poly: ClusterPolynomial, eps: float) -> PolynomialCheck:
    """
    Evaluate ln|r_s| at every eigenvalue; pass iff the maximum is below ln(eps).

    Also checks, at each cluster's upper edge lam_{k_i}, that the product of the
    factors of clusters 1..i stays below eps.
    """
    lam = spec.values
    log_eps = math.log(eps)
    total = poly.log_abs(lam)
    max_log = float(np.max(total))
    passed = max_log < log_eps + VERIFY_SLACK

    edge_logs: List[float] = []
    intervals = poly.partition.intervals
    for i, k in enumerate(poly.partition.indices[1:]):
        edge = lam[k - 1]
        partial = sum(
            float(log_abs_scaled_cheb(intervals[j], poly.degrees[j], edge)) for j in range(i + 1)
        )
        edge_logs.append(partial)
    edges_passed = all(v < log_eps + VERIFY_SLACK for v in edge_logs)

    return PolynomialCheck(
        max_log=max_log,
        log_eps=log_eps,
        passed=bool(passed),
        edge_logs=edge_logs,
        edges_passed=edges_passed,
    )
