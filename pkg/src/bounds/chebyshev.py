"""
Scaled Chebyshev factors in the log domain.

Every magnitude here is a natural log: degrees in the tens of thousands on
arguments of order 1e9 overflow any linear-domain evaluation.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

LOG2 = math.log(2.0)


def _out(a: np.ndarray) -> ArrayLike:
    return float(a) if a.ndim == 0 else a


@dataclass(frozen=True)
class ClusterInterval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 < self.lo <= self.hi):
            raise ValueError(f"cluster interval must satisfy 0 < lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def kappa(self) -> float:
        return self.hi / self.lo


def log_inv_gamma(kappa: float) -> float:
    """
    ln((sqrt(k) + 1) / (sqrt(k) - 1)) = -ln(gamma) = arcosh|T(0)|.

    Evaluated through log1p so that kappa ~ 1e10 keeps full relative accuracy.
    Near kappa = 1 the rationalised form (sqrt(k) + 1)^2 / (k - 1) is used, since
    sqrt(k) rounds to 1.0 for k within an ulp of 1.
    """
    if kappa <= 1.0:
        return math.inf
    if kappa < 4.0:
        return math.log((math.sqrt(kappa) + 1.0) ** 2 / (kappa - 1.0))
    return -math.log1p(-2.0 / (math.sqrt(kappa) + 1.0))


def affine_map(interval: ClusterInterval, lam: ArrayLike) -> ArrayLike:
    """
    T(lam) = (2 lam - (lo + hi)) / (hi - lo): lo -> -1, hi -> +1, 0 -> below -1.

    A degenerate interval maps its point to 0 and everything else to +-inf.
    """
    lo, hi = interval.lo, interval.hi
    lam_arr = np.asarray(lam, dtype=np.float64)
    if interval.degenerate:
        out = np.where(lam_arr == lo, 0.0, np.sign(lam_arr - lo) * np.inf)
    else:
        out = (2.0 * lam_arr - (lo + hi)) / (hi - lo)
    return _out(np.asarray(out))


def log_cosh(t: ArrayLike) -> ArrayLike:
    """ln cosh(t) without overflow."""
    t = np.abs(np.asarray(t, dtype=np.float64))
    return _out(t + np.log1p(np.exp(-2.0 * t)) - LOG2)


def log_abs_cheb(q: int, x: ArrayLike) -> ArrayLike:
    """
    ln |C_q(x)| for the Chebyshev polynomial of the first kind.

    |x| <= 1: ln|cos(q arccos x)|, -inf at exact roots; |x| > 1: ln cosh(q arcosh|x|).
    """
    x_arr = np.asarray(x, dtype=np.float64)
    if q == 0:
        return _out(np.zeros_like(x_arr))

    ax = np.abs(x_arr)
    inside = ax <= 1.0
    out = np.empty_like(x_arr)

    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x_arr[inside]
        c = np.cos(q * np.arccos(xin))
        # odd degrees vanish exactly at the origin
        if q % 2 == 1:
            c = np.where(xin == 0.0, 0.0, c)
        out[inside] = np.log(np.abs(c))
        out[~inside] = log_cosh(q * np.arccosh(ax[~inside]))

    return _out(out)


def log_abs_scaled_cheb(interval: ClusterInterval, q: int, lam: ArrayLike) -> ArrayLike:
    """
    ln |C_q(T(lam)) / C_q(T(0))|, the cluster's scaled Chebyshev factor.

    Degenerate (singleton) intervals use the linear factor (1 - lam/lo) raised
    to q. Exactly 0 at lam = 0 for every interval and degree.
    """
    lam_arr = np.asarray(lam, dtype=np.float64)
    if q == 0:
        return _out(np.zeros_like(lam_arr))

    with np.errstate(divide="ignore"):
        if interval.degenerate:
            out = q * np.log(np.abs(1.0 - lam_arr / interval.lo))
        else:
            log_denominator = log_cosh(q * log_inv_gamma(interval.kappa))
            out = np.asarray(log_abs_cheb(q, affine_map(interval, lam_arr))) - log_denominator
    out = np.where(lam_arr == 0.0, 0.0, out)
    return _out(np.asarray(out, dtype=np.float64))


def log_growth_rate(interval: ClusterInterval, lam: float) -> float:
    """
    Per-degree log growth of a scaled factor at a point above the interval:
    arcosh T(lam) - arcosh|T(0)|, so |C_p(T(lam)) / C_p(T(0))| <= exp(p * rate).

    Singleton intervals return ln|1 - lam/lo|, their factor's actual magnitude.
    """
    if interval.degenerate:
        return math.log(abs(1.0 - lam / interval.lo)) if lam != interval.lo else -math.inf
    t = float(affine_map(interval, lam))
    assert t > 1.0, "growth rate is only defined strictly above the interval"
    return math.acosh(t) - log_inv_gamma(interval.kappa)
