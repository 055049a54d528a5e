import math

from src.utils.errors import LambertDomainError

BRANCH_POINT = -math.exp(-1.0)

# Below this argument the branch-point series is the better seed.
_SERIES_CUTOFF = -0.25
_DOMAIN_SLACK = 1e-15


def asymptotic_seed(x: float) -> float:
    """L - l + l/L with L = ln(-x), l = ln(-L); accurate as x -> 0-."""
    L = math.log(-x)
    l = math.log(-L)
    return L - l + l / L


def _branch_point_seed(x: float) -> float:
    # series in p = -sqrt(2(e x + 1)) about the branch point, lower branch
    p = -math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3


def lambert_w_minus1(x: float, tol: float = 1e-15, max_iter: int = 64) -> float:
    """
    Lower real branch W_-1 of the inverse of y -> y e^y, for x in [-1/e, 0).

    Halley iteration on w e^w - x from the asymptotic (or branch-point) seed.
    Returns w <= -1.
    """
    x = float(x)
    if not (BRANCH_POINT - _DOMAIN_SLACK <= x < 0.0):
        raise LambertDomainError(f"W_-1 is real only on [-1/e, 0), got x={x!r}")
    if x <= BRANCH_POINT:
        return -1.0

    w = _branch_point_seed(x) if x < _SERIES_CUTOFF else asymptotic_seed(x)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0 or f == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_next = min(w - step, -1.0)
        if abs(w_next - w) <= tol * abs(w_next):
            w = w_next
            break
        w = w_next
    return w
