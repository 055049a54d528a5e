from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from src.bounds.report import BoundReport
from src.bounds.spectrum import Spectrum
from src.estimator.ritz_estimator import EstimatorConfig, EstimatorState
from src.krylov.lanczos import ritz_values
from src.krylov.trace import CGTrace
from src.partition.greedy import analyze_spectrum
from src.utils.config import DEFAULT_EPS


def confidence_label_from_score(score: float) -> str:
    """Map the early-estimate confidence score into a label."""
    if score >= 0.5:
        return "high"
    if score >= 0.2:
        return "medium"
    return "low"


def estimate_confidence(i: int, ms_early: int) -> Tuple[float, str]:
    """
    Ritz values seen versus the bound they produced: after i iterations at most
    i Ritz values exist, so i/ms_early near 1 means the estimate saw as many
    values as it predicts iterations.
    """
    if ms_early <= 0:
        return 0.0, "low"
    score = min(1.0, i / ms_early)
    return score, confidence_label_from_score(score)


@dataclass
class ComparisonRecord:
    """Actual iterations against m1 and ms (early and at convergence) for one run."""

    m: int
    status: str
    m1: Optional[int]
    ms_converged: Optional[int]
    ms_early: Optional[int]
    i_early: Optional[int]
    kappa: Optional[float]
    s: Optional[int]
    confidence: float = 0.0
    confidence_label: str = "low"
    terminal_estimate: bool = False
    converged_report: Optional[BoundReport] = None
    oracle_report: Optional[BoundReport] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "status": self.status,
            "m1": self.m1,
            "ms_converged": self.ms_converged,
            "ms_early": self.ms_early,
            "i_early": self.i_early,
            "kappa": self.kappa,
            "s": self.s,
            "confidence": self.confidence,
            "confidence_label": self.confidence_label,
            "terminal_estimate": self.terminal_estimate,
            "converged_report": self.converged_report.to_dict() if self.converged_report else None,
            "oracle_report": self.oracle_report.to_dict() if self.oracle_report else None,
        }


def final_report(
    state: Optional[EstimatorState],
    trace: CGTrace,
    cfg: Optional[EstimatorConfig] = None,
    oracle: Optional[Spectrum] = None,
) -> ComparisonRecord:
    """
    Assemble m, m1, ms from the converged Ritz values, and the early estimate.

    With an oracle spectrum, m1/kappa/s come from its report instead of the
    Ritz one; ms_converged always comes from the Ritz values.
    """
    eps = cfg.eps if cfg is not None else DEFAULT_EPS
    mode = cfg.mode if cfg is not None else "exact"

    converged: Optional[BoundReport] = None
    if trace.m > 0:
        converged = analyze_spectrum(ritz_values(trace), eps, mode)
    oracle_report = analyze_spectrum(oracle, eps, mode) if oracle is not None else None
    reference = oracle_report or converged

    record = ComparisonRecord(
        m=trace.m,
        status=trace.status,
        m1=reference.m1 if reference else None,
        ms_converged=converged.ms if converged else None,
        ms_early=None,
        i_early=None,
        kappa=reference.kappa if reference else None,
        s=reference.s if reference else None,
        converged_report=converged,
        oracle_report=oracle_report,
    )
    if state is not None and state.estimate is not None:
        est = state.estimate
        record.ms_early = est.ms
        record.i_early = est.iteration
        record.terminal_estimate = est.terminal
        record.confidence, record.confidence_label = estimate_confidence(est.iteration, est.ms)
    return record
