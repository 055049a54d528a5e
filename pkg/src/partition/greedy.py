from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.bounds.iteration_bounds import cluster_degrees, m1
from src.bounds.report import BoundReport, build_bound_report
from src.bounds.spectrum import ClusterPartition, Spectrum
from src.partition.split import AcceptMode, accept_split, find_candidate
from src.utils.config import DEFAULT_EPS
from src.utils.logger import get_logger

logger = get_logger("PARTITION")


@dataclass
class PartitionResult:
    partition: ClusterPartition
    decisions: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "indices": list(self.partition.indices),
            "clusters": [list(c) for c in self.partition.clusters],
            "decisions": self.decisions,
        }


def partition_spectrum(
    spec: Spectrum,
    eps: float = DEFAULT_EPS,
    mode: AcceptMode = "exact",
) -> PartitionResult:
    """
    Greedy recursive splitting with the condition numbers local to each
    subcluster. Depth-first, lower subcluster first; stops on rejection or a
    singleton. Returns global partition indices plus one decision per test.
    """
    cuts: List[int] = []
    decisions: List[Dict[str, Any]] = []
    # explicit stack: an all-singleton spectrum recurses n levels deep
    stack: List[Tuple[int, int, int]] = [(1, spec.n, 0)]

    while stack:
        lo, hi, depth = stack.pop()
        if hi - lo + 1 < 2:
            continue
        sub = spec.sub(lo, hi)
        cand = find_candidate(sub)
        decision = accept_split(sub, cand, eps, mode)
        k = lo - 1 + cand.k
        decisions.append({"range": [lo, hi], "depth": depth, "split_at": k, **decision.to_dict()})
        if not decision.accepted:
            continue
        cuts.append(k)
        stack.append((k + 1, hi, depth + 1))
        stack.append((lo, k, depth + 1))

    part = ClusterPartition(spec, (0, *sorted(cuts), spec.n))
    if part.s >= 2:
        # a split partition must never bound worse than the single cluster
        split_ms = cluster_degrees(spec, part, eps).total_degree
        single_m1 = m1(spec.kappa, eps)
        if split_ms > single_m1:
            logger.info("reverting s=%d partition: ms=%d > m1=%d", part.s, split_ms, single_m1)
            decisions.append(
                {
                    "range": [1, spec.n],
                    "depth": 0,
                    "split_at": None,
                    "accepted": False,
                    "reverted": True,
                    "ms": split_ms,
                    "m1": single_m1,
                    "mode": mode,
                }
            )
            part = ClusterPartition.single(spec)
    logger.debug("partition of n=%d: s=%d after %d tests", spec.n, part.s, len(decisions))
    return PartitionResult(partition=part, decisions=decisions)


def greedy_partition(
    spec: Spectrum,
    eps: float = DEFAULT_EPS,
    mode: AcceptMode = "exact",
) -> ClusterPartition:
    return partition_spectrum(spec, eps, mode).partition


def analyze_spectrum(
    spec: Spectrum,
    eps: float = DEFAULT_EPS,
    mode: AcceptMode = "exact",
    result: Optional[PartitionResult] = None,
) -> BoundReport:
    """Partition, degrees, m1/m2/ms and polynomial verification in one report."""
    result = result or partition_spectrum(spec, eps, mode)
    poly = cluster_degrees(spec, result.partition, eps)
    top_m2 = result.decisions[0]["m2"] if result.decisions else None
    return build_bound_report(poly, m2_value=top_m2, decisions=result.decisions)
