import numpy as np
import pytest

from conftest import diag, random_spd
from src.bounds.iteration_bounds import m1
from src.bounds.spectrum import Spectrum
from src.estimator.report import confidence_label_from_score, estimate_confidence, final_report
from src.estimator.ritz_estimator import (
    EstimatorConfig,
    EstimatorObserver,
    edge_ratios,
    replay,
)
from src.krylov.pcg import pcg
from src.krylov.trace import StopRule
from src.linalg.sparse import as_sparse
from src.utils.config import EstimatorSettings
from src.utils.helpers import read_jsonl

TWO_CLUSTERS = np.concatenate([np.linspace(1.0, 2.0, 20), np.linspace(1e6, 2e6, 20)])


# ---------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta": 0},
        {"tau": 0.0},
        {"eta": 10, "i_max": 5},
        {"r": 0.0},
        {"r": 1.5},
        {"eps": 1.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        EstimatorConfig(**kwargs)


def test_cap_uses_known_run_length():
    assert EstimatorConfig(i_max=100).cap == 100
    assert EstimatorConfig(i_max=100, r=0.5, known_m=41).cap == 20
    assert EstimatorConfig(i_max=100, r=0.5, known_m=69).cap == 34
    assert EstimatorConfig(i_max=100, r=0.5, known_m=1000).cap == 100


def test_config_from_settings_picks_coarse_space_default():
    cfg = EstimatorConfig.from_settings(EstimatorSettings(), "rgdsw", eps=1e-6)
    assert cfg.i_max == 300
    assert cfg.eps == 1e-6
    cfg = EstimatorConfig.from_settings(EstimatorSettings(i_max=40), "gdsw")
    assert cfg.i_max == 40


def test_edge_ratios_measure_growth():
    assert edge_ratios([1.0, 2.0], [2.0, 1.0]) == [2.0, 0.5]
    assert edge_ratios([3.0], [3.0]) == [1.0]


# ---------------------------------------------------------------------
# Live estimation
# ---------------------------------------------------------------------


def test_scaled_identity_gets_a_terminal_estimate(rng):
    cfg = EstimatorConfig()
    obs = EstimatorObserver(cfg)
    _, trace = pcg(diag(np.full(20, 5.0)), rng.standard_normal(20), observer=obs)
    state = obs.finalize(trace)
    assert trace.m == 1
    assert state.fired
    assert state.estimate.terminal
    assert state.estimate.ms == 1
    assert state.events[-1]["event"] == "terminal"


def test_two_cluster_run_produces_an_estimate():
    A = diag(TWO_CLUSTERS)
    cfg = EstimatorConfig(eta=5, tau=0.1, i_max=100)
    obs = EstimatorObserver(cfg)
    _, trace = pcg(A, np.ones(TWO_CLUSTERS.size), observer=obs)
    state = obs.finalize(trace)
    assert trace.converged
    assert state.fired
    assert state.estimate.iteration <= trace.m
    assert state.estimate.ms < m1(TWO_CLUSTERS[-1] / TWO_CLUSTERS[0], cfg.eps)
    assert state.estimate.report.verification["passed"]


def test_cluster_count_change_restarts_stabilization():
    cfg = EstimatorConfig(eta=1, i_max=10)
    obs = EstimatorObserver(cfg)
    _, trace = pcg(diag([1.0, 2.0, 1e6]), np.ones(3), observer=obs)
    checks = [e for e in obs.state.events if e["event"] == "check"]
    assert trace.m == 3
    assert [c["s"] for c in checks[:2]] == [1, 2]
    assert checks[1]["edge_ratios"] is None
    assert not checks[1]["stable"]


def test_descending_lower_edges_do_not_block_the_estimate():
    # the lowest eigenvalue sits alone well below the rest of its cluster; the
    # smallest Ritz value descends onto it while the other edges settle
    values = np.concatenate([[1.0], np.linspace(3.0, 4.0, 60), np.linspace(1e6, 2e6, 60)])
    _, trace = pcg(diag(values), np.ones(values.size), stop=StopRule(eps=1e-10))
    cfg = EstimatorConfig(eta=5, tau=0.1, i_max=100, eps=1e-10, known_m=trace.m)
    state = replay(trace, cfg)
    assert state.fired
    assert not state.estimate.terminal
    assert state.estimate.iteration <= trace.m // 2
    fired = state.events[-1]
    assert all(q < 1.1 for q in fired["edge_ratios"])
    assert trace.m / 10 <= state.estimate.ms <= 10 * trace.m


def test_estimator_closes_at_the_cap(rng):
    A = as_sparse(random_spd(30, rng, cond=1e4))
    _, trace = pcg(A, rng.standard_normal(30))
    cfg = EstimatorConfig(eta=5, i_max=10, r=0.5, known_m=8)
    assert cfg.cap == 4
    state = replay(trace, cfg)
    assert not state.fired
    assert state.closed
    assert state.events[-1]["event"] == "closed"
    assert state.n_checks == 0


def test_replay_matches_the_live_observer():
    A = diag(TWO_CLUSTERS)
    cfg = EstimatorConfig()
    obs = EstimatorObserver(cfg)
    _, trace = pcg(A, np.ones(TWO_CLUSTERS.size), observer=obs)
    live = obs.finalize(trace)
    replayed = replay(trace, cfg)
    assert replayed.estimate.iteration == live.estimate.iteration
    assert replayed.estimate.ms == live.estimate.ms


def test_observer_can_halt_the_solver():
    A = diag(TWO_CLUSTERS)
    cfg = EstimatorConfig(halt_solver=True)
    obs = EstimatorObserver(cfg)
    _, trace = pcg(A, np.ones(TWO_CLUSTERS.size), observer=obs)
    if obs.state.fired:
        # convergence on the same iteration takes precedence
        assert trace.status in ("stopped_by_observer", "converged")
        assert trace.m == obs.state.estimate.iteration
    else:
        assert trace.converged


def test_events_are_written_as_jsonl(tmp_path):
    cfg = EstimatorConfig(eta=1, i_max=10)
    obs = EstimatorObserver(cfg)
    _, trace = pcg(diag([1.0, 2.0, 1e6]), np.ones(3), observer=obs)
    obs.finalize(trace)
    path = tmp_path / "events.jsonl"
    obs.write_events(str(path))
    events = read_jsonl(str(path))
    assert len(events) == len(obs.state.events)
    assert events[0]["iteration"] == 1


# ---------------------------------------------------------------------
# Comparison record
# ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "i, ms_early, label",
    [(5, 10, "high"), (3, 10, "medium"), (1, 10, "low"), (20, 10, "high"), (4, 0, "low")],
)
def test_confidence(i, ms_early, label):
    score, got = estimate_confidence(i, ms_early)
    assert got == label
    assert 0.0 <= score <= 1.0
    assert confidence_label_from_score(score) == label


def test_final_report_for_scaled_identity(rng):
    cfg = EstimatorConfig()
    obs = EstimatorObserver(cfg)
    _, trace = pcg(diag(np.full(10, 5.0)), rng.standard_normal(10), observer=obs)
    record = final_report(obs.finalize(trace), trace, cfg)
    assert record.m == 1
    assert record.ms_converged == 1
    assert record.ms_early == 1
    assert record.terminal_estimate
    assert record.confidence_label == "high"
    assert record.to_dict()["converged_report"]["ms"] == 1


def test_final_report_prefers_oracle_for_m1():
    A = diag(TWO_CLUSTERS)
    _, trace = pcg(A, np.ones(TWO_CLUSTERS.size), stop=StopRule(eps=1e-8))
    oracle = Spectrum(TWO_CLUSTERS)
    record = final_report(None, trace, EstimatorConfig(), oracle=oracle)
    assert record.m1 == m1(oracle.kappa, 1e-8)
    assert record.s == 2
    assert record.ms_early is None
    assert record.oracle_report.ms <= record.m1
