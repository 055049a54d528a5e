"""
Early estimation of the multi-cluster bound from Ritz values of a running PCG.

Every `eta` iterations the Ritz values are partitioned. Once no cluster edge
value has grown by a factor (1 + tau) or more since the previous check (same
cluster count), the bound is computed from the current Ritz spectrum. Shrinking
edges always pass; by interlacing, lower Ritz edges only descend.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.bounds.report import BoundReport
from src.bounds.spectrum import ClusterPartition, Spectrum
from src.krylov.lanczos import ritz_values
from src.krylov.trace import CGTrace
from src.partition.greedy import analyze_spectrum, partition_spectrum
from src.partition.split import AcceptMode
from src.utils.config import DEFAULT_EPS, EstimatorSettings
from src.utils.errors import ConvergenceError, NotPositiveDefiniteError
from src.utils.helpers import write_jsonl
from src.utils.logger import get_logger

logger = get_logger("ESTIMATOR")


@dataclass(frozen=True)
class EstimatorConfig:
    """
    eta: check period; tau: edge stabilization tolerance; i_max: iteration cap;
    r: fraction of a known total run length that also caps the checks.
    known_m is set when re-running a solved problem (experiment mode); live
    runs leave it None and are capped by i_max alone.
    """

    eta: int = 5
    tau: float = 0.1
    i_max: int = 100
    r: float = 0.5
    eps: float = DEFAULT_EPS
    known_m: Optional[int] = None
    mode: AcceptMode = "exact"
    halt_solver: bool = False

    def __post_init__(self) -> None:
        if self.eta < 1:
            raise ValueError(f"eta must be >= 1, got {self.eta}")
        if self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.i_max < self.eta:
            raise ValueError(f"i_max ({self.i_max}) must be >= eta ({self.eta})")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"r must lie in (0, 1], got {self.r}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")

    @property
    def cap(self) -> int:
        if self.known_m is None:
            return self.i_max
        return min(self.i_max, math.floor(self.r * self.known_m))

    @classmethod
    def from_settings(
        cls,
        settings: EstimatorSettings,
        coarse_space: str,
        eps: float = DEFAULT_EPS,
        known_m: Optional[int] = None,
    ) -> "EstimatorConfig":
        return cls(
            eta=settings.eta,
            tau=settings.tau,
            i_max=settings.resolved_i_max(coarse_space),
            r=settings.r,
            eps=eps,
            known_m=known_m,
        )


@dataclass
class EarlyEstimate:
    iteration: int
    ms: int
    s: int
    report: BoundReport
    terminal: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "ms": self.ms,
            "s": self.s,
            "terminal": self.terminal,
        }


@dataclass
class EstimatorState:
    last_iteration: Optional[int] = None
    last_spectrum: Optional[Spectrum] = None
    last_partition: Optional[ClusterPartition] = None
    last_edges: List[float] = field(default_factory=list)
    edge_stable: List[bool] = field(default_factory=list)
    estimate: Optional[EarlyEstimate] = None
    closed: bool = False
    events: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def fired(self) -> bool:
        return self.estimate is not None

    @property
    def n_checks(self) -> int:
        return sum(1 for e in self.events if e.get("event") == "check")


def edge_ratios(previous: List[float], current: List[float]) -> List[float]:
    """current / previous for matching edge values; stable edges stay below 1 + tau."""
    return [b / a for a, b in zip(previous, current)]


def _fire(state: EstimatorState, spec: Spectrum, cfg: EstimatorConfig, i: int, result, terminal: bool) -> None:
    report = analyze_spectrum(spec, cfg.eps, cfg.mode, result=result)
    state.estimate = EarlyEstimate(iteration=i, ms=report.ms, s=report.s, report=report, terminal=terminal)
    logger.info("estimate fired at i=%d: ms=%d (s=%d)%s", i, report.ms, report.s, " [terminal]" if terminal else "")


def on_iteration(state: EstimatorState, trace: CGTrace, cfg: EstimatorConfig) -> EstimatorState:
    """
    Advance the estimator by one PCG iteration. Checks run at multiples of
    eta up to cfg.cap; after the cap the state closes without an estimate.
    """
    i = trace.m
    if state.fired or state.closed or i == 0:
        return state
    if i > cfg.cap:
        state.closed = True
        state.events.append({"event": "closed", "iteration": i, "cap": cfg.cap, "fired": False})
        logger.info("not stabilized within %d iterations", cfg.cap)
        return state
    if i % cfg.eta != 0:
        return state

    try:
        spec = ritz_values(trace)
    except (NotPositiveDefiniteError, ConvergenceError) as e:
        state.events.append({"event": "check", "iteration": i, "error": str(e), "fired": False})
        logger.warning("Ritz values unavailable at i=%d: %s", i, e)
        return state

    result = partition_spectrum(spec, cfg.eps, cfg.mode)
    part = result.partition
    edges = part.edge_values()

    ratios: Optional[List[float]] = None
    stable = False
    if state.last_partition is not None and state.last_partition.s == part.s:
        ratios = edge_ratios(state.last_edges, edges)
        state.edge_stable = [q < 1.0 + cfg.tau for q in ratios]
        stable = all(state.edge_stable)
    else:
        # a changed cluster count restarts stabilization
        state.edge_stable = [False] * len(edges)

    event: Dict[str, Any] = {
        "event": "check",
        "iteration": i,
        "ritz_count": spec.n,
        "s": part.s,
        "partition": list(part.indices),
        "edges": edges,
        "edge_ratios": ratios,
        "stable": stable,
        "fired": False,
    }
    if stable:
        _fire(state, spec, cfg, i, result, terminal=False)
        event["fired"] = True
        event["ms"] = state.estimate.ms
    state.events.append(event)

    state.last_iteration = i
    state.last_spectrum = spec
    state.last_partition = part
    state.last_edges = edges
    return state


def finalize(state: EstimatorState, trace: CGTrace, cfg: EstimatorConfig) -> EstimatorState:
    """
    A run that converged inside the cap before any estimate fired gets one
    from its final Ritz values (the first feasible check).
    """
    if state.fired or state.closed or not trace.converged or trace.m == 0 or trace.m > cfg.cap:
        return state
    try:
        spec = ritz_values(trace)
    except (NotPositiveDefiniteError, ConvergenceError) as e:
        logger.warning("final Ritz values unavailable: %s", e)
        return state
    result = partition_spectrum(spec, cfg.eps, cfg.mode)
    _fire(state, spec, cfg, trace.m, result, terminal=True)
    state.events.append(
        {
            "event": "terminal",
            "iteration": trace.m,
            "ritz_count": spec.n,
            "s": result.partition.s,
            "partition": list(result.partition.indices),
            "fired": True,
            "ms": state.estimate.ms,
        }
    )
    return state


def replay(trace: CGTrace, cfg: EstimatorConfig) -> EstimatorState:
    """
    Run the estimator over a finished trace, iteration by iteration, as the
    observer would have seen it. Experiment mode: set cfg.known_m = trace.m.
    """
    state = EstimatorState()
    for i in range(1, trace.m + 1):
        on_iteration(state, trace.prefix(i), cfg)
        if state.fired or state.closed:
            break
    return finalize(state, trace, cfg)


class EstimatorObserver:
    """PCG observer wrapper: owns one EstimatorState for one solver run."""

    def __init__(self, cfg: EstimatorConfig) -> None:
        self.cfg = cfg
        self.state = EstimatorState()

    def __call__(self, trace: CGTrace) -> bool:
        was_fired = self.state.fired
        on_iteration(self.state, trace, self.cfg)
        return self.cfg.halt_solver and self.state.fired and not was_fired

    def finalize(self, trace: CGTrace) -> EstimatorState:
        return finalize(self.state, trace, self.cfg)

    def write_events(self, path: str) -> None:
        write_jsonl(self.state.events, path)
