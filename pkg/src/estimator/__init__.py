from src.estimator.report import ComparisonRecord, estimate_confidence, final_report
from src.estimator.ritz_estimator import (
    EarlyEstimate,
    EstimatorConfig,
    EstimatorObserver,
    EstimatorState,
    edge_ratios,
    finalize,
    on_iteration,
    replay,
)

__all__ = [
    "ComparisonRecord",
    "EarlyEstimate",
    "EstimatorConfig",
    "EstimatorObserver",
    "EstimatorState",
    "edge_ratios",
    "estimate_confidence",
    "final_report",
    "finalize",
    "on_iteration",
    "replay",
]
