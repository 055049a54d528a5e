"""
End-to-end acceptance suites: randomized soundness of the multi-cluster bound,
polynomial verification, Lambert W accuracy, early estimation and the
high-contrast model problem. Marked slow; run with `pytest -m slow`.
"""
import json
import math

import numpy as np
import pytest

from src.bounds.chebyshev import log_abs_scaled_cheb
from src.bounds.iteration_bounds import ClusterPolynomial, cluster_degrees, m1, verify_polynomial
from src.bounds.spectrum import ClusterPartition, Spectrum, read_spectrum
from src.evaluation.synthetic import generate_clustered_spectrum, run_synthetic_suite
from src.estimator.ritz_estimator import EstimatorConfig
from src.main import cmd_bound, cmd_solve
from src.partition.greedy import analyze_spectrum, greedy_partition
from src.partition.lambertw import BRANCH_POINT, lambert_w_minus1
from src.utils.config import build_experiment_config

pytestmark = pytest.mark.slow

EPS = 1e-8


def _suite_spectra(cases: int = 100, seed: int = 0):
    rng = np.random.default_rng(seed)
    for case in range(cases):
        s = (1, 2, 3, 4)[case % 4]
        n = int(rng.integers(5 * s, 401))
        yield generate_clustered_spectrum(rng, s, n, kappa_max=10.0 ** rng.uniform(2 * s, 10))


# ---------------------------------------------------------------------
# Bound soundness on diagonal systems
# ---------------------------------------------------------------------


def test_multicluster_bound_is_sound():
    rows = run_synthetic_suite(cases=100, clusters=[1, 2, 3, 4], n_max=400, kappa_max=1e10, seed=0, eps=EPS)
    assert len(rows) == 100
    assert all(r["status"] == "converged" for r in rows)
    unsound = [(r["case"], r["m"], r["ms"]) for r in rows if not r["sound"]]
    assert unsound == []
    assert all(r["verified"] for r in rows)


def test_verification_detects_a_starved_last_cluster():
    failures = 0
    for spec in _suite_spectra():
        report = analyze_spectrum(spec, EPS)
        part = ClusterPartition(spec, tuple(report.partition))
        assert verify_polynomial(spec, cluster_degrees(spec, part, EPS), EPS).passed

        degrees = list(report.degrees)
        if degrees[-1] == 0:
            continue
        degrees[-1] -= 1
        starved = ClusterPolynomial(partition=part, degrees=tuple(degrees), eps=EPS)
        failures += not verify_polynomial(spec, starved, EPS).passed
    assert failures >= 1


def test_higher_cluster_factors_never_amplify_lower_clusters():
    rng = np.random.default_rng(7)
    samples = 0
    while samples < 10_000:
        s = int(rng.integers(2, 5))
        spec = generate_clustered_spectrum(rng, s, int(rng.integers(5 * s, 100)), kappa_max=1e10)
        part = greedy_partition(spec, EPS)
        if part.s < 2:
            continue
        intervals = part.intervals
        for _ in range(200):
            j, i = sorted(rng.choice(part.s, size=2, replace=False))
            lam = rng.uniform(intervals[j].lo, intervals[j].hi)
            q = int(rng.integers(1, 60))
            assert float(log_abs_scaled_cheb(intervals[i], q, lam)) < 0.0, (i, j, q, lam)
            samples += 1


def test_single_cluster_degree_agrees_with_m1():
    rng = np.random.default_rng(3)
    for _ in range(500):
        kappa = 10.0 ** rng.uniform(2, 10)
        eps = 10.0 ** rng.uniform(-12, -4)
        spec = Spectrum([1.0, kappa])
        degree = cluster_degrees(spec, ClusterPartition.single(spec), eps).total_degree
        assert abs(degree - m1(kappa, eps)) <= 1, (kappa, eps)


def test_lambert_w_residual_on_log_grid():
    xs = -np.geomspace(1e-12, -BRANCH_POINT, 10_000)
    for x in xs:
        w = lambert_w_minus1(float(x))
        assert abs(w * math.exp(w) - x) <= 1e-12 * abs(x)
    assert lambert_w_minus1(BRANCH_POINT) == pytest.approx(-1.0, abs=1e-6)


# ---------------------------------------------------------------------
# Early estimation
# ---------------------------------------------------------------------


def test_early_estimate_on_two_cluster_systems():
    est = EstimatorConfig(eta=5, tau=0.1, i_max=100, eps=EPS)
    rows = run_synthetic_suite(cases=50, clusters=[2], n_max=200, kappa_max=1e10, seed=11, eps=EPS, estimator=est)
    useful = 0
    for r in rows:
        if r["ms_early"] is None:
            continue
        assert r["i_early"] <= math.floor(0.5 * r["m"])
        useful += r["m"] / 10.0 <= r["ms_early"] <= 10.0 * r["m"]
    assert useful >= 45


# ---------------------------------------------------------------------
# Model problem
# ---------------------------------------------------------------------


def test_ritz_extremes_match_the_oracle(tmp_path):
    cfg = build_experiment_config(
        {"problem": {"H": 0.25, "H_over_h": 4, "inclusions_per_edge": 1, "channel_len": 1, "contrast": 1e6}},
        out_dir=str(tmp_path),
    )
    row = cmd_solve(cfg, check_ritz=True)
    assert row.kappa_source == "oracle"
    cell = tmp_path / "gdsw_H4"
    oracle = read_spectrum(str(cell / "oracle_spectrum.txt"))
    check = json.loads((cell / "ritz_check.json").read_text())
    assert check["stable"]
    assert check["lam_min"] == pytest.approx(oracle.lam(1), rel=1e-6)
    assert check["lam_max"] == pytest.approx(oracle.lam(oracle.n), rel=1e-6)
    # the production run itself never overshoots the spectrum
    ritz = read_spectrum(str(cell / "ritz_spectrum.txt"))
    assert ritz.lam(1) >= oracle.lam(1) * (1 - 1e-10)
    assert ritz.lam(ritz.n) <= oracle.lam(oracle.n) * (1 + 1e-10)
    stored = json.loads((cell / "bound_report.json").read_text())
    report = cmd_bound(str(cell / "oracle_spectrum.txt"), eps=cfg.stop.eps)
    for key in ("n", "kappa", "m1", "m2", "ms", "partition", "degrees", "kappas"):
        assert report.to_dict()[key] == stored[key], key


def test_high_contrast_gdsw_bound_is_sharp(tmp_path):
    cfg = build_experiment_config({"problem": {"H": 0.25, "H_over_h": 16, "contrast": 1e8}}, out_dir=str(tmp_path))
    row = cmd_solve(cfg, coarse="gdsw")
    assert row.status == "converged"
    assert row.m <= 200
    assert row.m1 / row.m >= 100
    assert 0.5 <= row.ms_converged / row.m <= 20


def test_coarse_spaces_are_discriminated_by_ms(tmp_path):
    cfg = build_experiment_config({"problem": {"H": 1 / 16, "H_over_h": 16, "contrast": 1e8}}, out_dir=str(tmp_path))
    gdsw = cmd_solve(cfg, coarse="gdsw")
    rgdsw = cmd_solve(cfg, coarse="rgdsw")
    assert rgdsw.m > gdsw.m
    assert rgdsw.ms_converged > gdsw.ms_converged
    # the classical bound barely tells the two coarse spaces apart
    assert max(gdsw.m1, rgdsw.m1) / min(gdsw.m1, rgdsw.m1) <= 2
