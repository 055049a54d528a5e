from src.partition.greedy import PartitionResult, analyze_spectrum, greedy_partition, partition_spectrum
from src.partition.lambertw import BRANCH_POINT, asymptotic_seed, lambert_w_minus1
from src.partition.split import (
    SplitCandidate,
    SplitDecision,
    ThresholdTerms,
    accept_split,
    find_candidate,
    threshold_terms,
)

__all__ = [
    "BRANCH_POINT",
    "PartitionResult",
    "SplitCandidate",
    "SplitDecision",
    "ThresholdTerms",
    "accept_split",
    "analyze_spectrum",
    "asymptotic_seed",
    "find_candidate",
    "greedy_partition",
    "lambert_w_minus1",
    "partition_spectrum",
    "threshold_terms",
]
