import math
import time
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.bounds.spectrum import Spectrum
from src.estimator.report import final_report
from src.estimator.ritz_estimator import EstimatorConfig, replay
from src.krylov.pcg import pcg
from src.krylov.trace import StopRule
from src.partition.greedy import analyze_spectrum
from src.utils.config import DEFAULT_EPS

# Each generated cluster has at least this many eigenvalues and an internal
# condition number drawn log-uniformly from CLUSTER_KAPPA_RANGE.
MIN_CLUSTER_SIZE = 5
CLUSTER_KAPPA_RANGE: Tuple[float, float] = (2.0, 20.0)

SYNTH_CSV_FIELDS = [
    "case",
    "source",
    "n",
    "s_generated",
    "s",
    "kappa",
    "m",
    "status",
    "m1",
    "ms",
    "ms_early",
    "i_early",
    "verified",
    "sound",
    "wall_time_s",
]


def _loguniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def generate_clustered_spectrum(
    rng: np.random.Generator,
    s: int,
    n: int,
    kappa_max: float = 1e10,
) -> Spectrum:
    """
    Random spectrum of n values in s clusters, smallest value 1, overall
    condition number at most kappa_max. Whatever log-range the clusters do not
    use is spread over the s - 1 gaps, so large kappa_max means wide gaps.
    """
    if s < 1:
        raise ValueError("at least one cluster is required")
    if n < MIN_CLUSTER_SIZE * s:
        raise ValueError(f"n={n} is too small for {s} clusters of >= {MIN_CLUSTER_SIZE} values")

    sizes = MIN_CLUSTER_SIZE + rng.multinomial(n - MIN_CLUSTER_SIZE * s, np.full(s, 1.0 / s))
    lo_k, hi_k = CLUSTER_KAPPA_RANGE
    hi_k = min(hi_k, kappa_max ** (1.0 / s))
    kappas = [_loguniform(rng, lo_k, hi_k) if hi_k > lo_k else hi_k for _ in range(s)]

    budget = max(math.log(kappa_max) - sum(math.log(k) for k in kappas), 0.0)
    if s > 1:
        shares = rng.dirichlet(np.ones(s - 1)) * rng.uniform(0.5, 1.0)
        log_gaps = budget * shares
    else:
        log_gaps = np.zeros(0)

    values: List[np.ndarray] = []
    lo = 1.0
    for c in range(s):
        hi = lo * kappas[c]
        inner = np.exp(rng.uniform(math.log(lo), math.log(hi), size=int(sizes[c]) - 2))
        values.append(np.concatenate([[lo], np.sort(inner), [hi]]))
        if c < s - 1:
            lo = hi * math.exp(log_gaps[c])
    return Spectrum(np.concatenate(values))


def diagonal_system(spec: Spectrum, rng: np.random.Generator) -> Tuple[sp.csr_matrix, np.ndarray, np.ndarray]:
    """diag(spec) with a right-hand side that touches every eigenvector."""
    A = sp.diags(spec.values, format="csr")
    b = rng.uniform(0.5, 1.5, size=spec.n) * rng.choice([-1.0, 1.0], size=spec.n)
    return A, b, b / spec.values


def run_synthetic_case(
    spec: Spectrum,
    rng: np.random.Generator,
    eps: float = DEFAULT_EPS,
    estimator: Optional[EstimatorConfig] = None,
    max_iter: int = 20000,
) -> Dict[str, Any]:
    """
    CG (no preconditioner) on diag(spec) to A-norm relative error eps, and the
    bounds computed from the exact spectrum. Ritz values of the run feed the
    early estimate when an estimator config is given.
    """
    t0 = time.perf_counter()
    A, b, x_ref = diagonal_system(spec, rng)
    _, trace = pcg(A, b, stop=StopRule(mode="anorm", eps=eps, max_iter=max_iter), x_ref=x_ref)
    report = analyze_spectrum(spec, eps)

    ms_early: Optional[int] = None
    i_early: Optional[int] = None
    if estimator is not None and trace.m > 0:
        cfg = EstimatorConfig(
            eta=estimator.eta,
            tau=estimator.tau,
            i_max=estimator.i_max,
            r=estimator.r,
            eps=eps,
            known_m=trace.m,
            mode=estimator.mode,
        )
        record = final_report(replay(trace, cfg), trace, cfg)
        ms_early, i_early = record.ms_early, record.i_early

    return {
        "n": spec.n,
        "s": report.s,
        "kappa": report.kappa,
        "m": trace.m,
        "status": trace.status,
        "m1": report.m1,
        "ms": report.ms,
        "ms_early": ms_early,
        "i_early": i_early,
        "verified": bool(report.verification.get("passed", False)),
        "sound": trace.m <= report.ms,
        "wall_time_s": round(time.perf_counter() - t0, 4),
    }


def run_synthetic_suite(
    cases: int,
    clusters: List[int],
    n_max: int,
    kappa_max: float,
    seed: int = 0,
    eps: float = DEFAULT_EPS,
    estimator: Optional[EstimatorConfig] = None,
) -> List[Dict[str, Any]]:
    """`cases` random spectra, cluster counts cycling through `clusters`."""
    rng = np.random.default_rng(seed)
    rows: List[Dict[str, Any]] = []
    for case in range(cases):
        s = clusters[case % len(clusters)]
        n = int(rng.integers(MIN_CLUSTER_SIZE * s, max(n_max, MIN_CLUSTER_SIZE * s) + 1))
        kmax = _loguniform(rng, 10.0 ** min(2 * s, math.log10(kappa_max)), kappa_max) if kappa_max > 10.0 else kappa_max
        spec = generate_clustered_spectrum(rng, s, n, kmax)
        row = run_synthetic_case(spec, rng, eps, estimator)
        rows.append({"case": case, "source": "generated", "s_generated": s, **row})
    return rows
