import math

import numpy as np
import pytest
from scipy.special import lambertw

from conftest import two_cluster_spectrum
from src.bounds.spectrum import Spectrum
from src.evaluation.synthetic import generate_clustered_spectrum
from src.partition.greedy import analyze_spectrum, greedy_partition, partition_spectrum
from src.partition.lambertw import BRANCH_POINT, asymptotic_seed, lambert_w_minus1
from src.partition.split import accept_split, find_candidate, threshold_terms
from src.utils.errors import LambertDomainError


# ---------------------------------------------------------------------
# Lower Lambert branch
# ---------------------------------------------------------------------


@pytest.mark.parametrize("x", [-0.3678, -0.3, -0.25, -0.2, -0.1, -1e-3, -1e-8, -1e-30])
def test_lambert_w_minus1_matches_scipy(x):
    w = lambert_w_minus1(x)
    ref = float(lambertw(x, k=-1).real)
    assert w <= -1.0
    assert math.isclose(w, ref, rel_tol=1e-10)
    assert math.isclose(w * math.exp(w), x, rel_tol=1e-10)


def test_lambert_w_minus1_at_branch_point():
    assert lambert_w_minus1(BRANCH_POINT) == -1.0


@pytest.mark.parametrize("x", [0.0, 0.1, -0.5, float("nan")])
def test_lambert_w_minus1_domain(x):
    with pytest.raises(LambertDomainError):
        lambert_w_minus1(x)


def test_asymptotic_seed_approaches_w_for_small_arguments():
    x = -1e-12
    assert abs(asymptotic_seed(x) - lambert_w_minus1(x)) / abs(lambert_w_minus1(x)) < 0.02


# ---------------------------------------------------------------------
# Split test
# ---------------------------------------------------------------------


def test_candidate_is_the_largest_gap():
    cand = find_candidate(two_cluster_spectrum())
    assert cand.k == 10
    assert math.isclose(cand.gap, 1e6 / 2.0)
    assert math.isclose(cand.kappa1, 2.0)
    assert math.isclose(cand.kappa2, 2.0)


def test_tied_gaps_take_the_smallest_index():
    cand = find_candidate(Spectrum(np.array([1.0, 2.0, 4.0, 8.0])))
    assert cand.k == 1
    assert cand.kappa1 == 1.0


def test_threshold_terms_are_consistent():
    terms = threshold_terms(2.0, 2.0)
    assert terms.x < 0.0
    assert math.isclose(terms.w * math.exp(terms.w), terms.x, rel_tol=1e-10)
    assert math.isclose(terms.threshold_exact, 16.0 * terms.w**2)
    assert terms.expansion == pytest.approx(terms.L - terms.l + terms.l / terms.L)


def test_two_cluster_split_is_accepted_in_every_mode():
    spec = two_cluster_spectrum()
    cand = find_candidate(spec)
    for mode in ("exact", "expansion", "m2"):
        decision = accept_split(spec, cand, 1e-8, mode)
        assert decision.accepted
        assert decision.m2 < decision.m1


def test_duplicate_eigenvalues_are_never_split():
    spec = Spectrum(np.full(6, 2.0))
    decision = accept_split(spec, find_candidate(spec), 1e-8)
    assert decision.candidate.gap == 1.0
    assert not decision.accepted


# ---------------------------------------------------------------------
# Greedy partition
# ---------------------------------------------------------------------


def test_uniform_spectrum_is_one_cluster():
    spec = Spectrum(np.linspace(1.0, 100.0, 50))
    result = partition_spectrum(spec, 1e-8)
    assert result.partition.s == 1
    assert len(result.decisions) == 1
    assert not result.decisions[0]["accepted"]


def test_two_clusters_are_found():
    spec = two_cluster_spectrum()
    result = partition_spectrum(spec, 1e-8)
    assert result.partition.indices == (0, 10, 20)
    # top split plus one rejected test in each half
    assert len(result.decisions) == 3
    assert result.decisions[0]["depth"] == 0
    assert result.decisions[0]["split_at"] == 10


def test_three_clusters_are_found_with_local_condition_numbers():
    values = np.concatenate([np.linspace(1, 2, 8), np.linspace(1e4, 2e4, 8), np.linspace(1e8, 2e8, 8)])
    part = greedy_partition(Spectrum(values), 1e-8)
    assert part.indices == (0, 8, 16, 24)


def test_singleton_spectrum_has_no_decisions():
    result = partition_spectrum(Spectrum(np.array([3.0])), 1e-8)
    assert result.partition.s == 1
    assert result.decisions == []


def test_partition_indices_are_global():
    values = np.concatenate([np.linspace(1, 2, 5), np.linspace(1e5, 2e5, 5), np.linspace(1e10, 2e10, 5)])
    result = partition_spectrum(Spectrum(values), 1e-6)
    for d in result.decisions:
        lo, hi = d["range"]
        assert lo <= d["split_at"] < hi


def test_analyze_spectrum_report():
    spec = two_cluster_spectrum()
    report = analyze_spectrum(spec, 1e-8)
    assert report.s == 2
    assert report.partition == [0, 10, 20]
    assert report.verification["passed"]
    assert report.ms < report.m2 < report.m1
    assert report.ms == sum(report.degrees)


def test_analyze_uniform_spectrum_gives_m1_scale_bound():
    spec = Spectrum(np.linspace(1.0, 100.0, 50))
    report = analyze_spectrum(spec, 1e-8)
    assert report.s == 1
    assert abs(report.ms - report.m1) <= 1


def test_two_far_apart_pairs():
    report = analyze_spectrum(Spectrum([1.0, 1.1, 1e8, 1.1e8]), 1e-8)
    assert report.s == 2
    assert report.partition == [0, 2, 4]
    assert report.verification["passed"]
    assert 100 * report.ms < report.m1


@pytest.mark.parametrize("mode", ["exact", "expansion", "m2"])
def test_split_partitions_never_bound_worse_than_m1(mode):
    rng = np.random.default_rng(2024)
    split = 0
    for _ in range(150):
        s = int(rng.integers(1, 5))
        n = int(rng.integers(5 * s, 120))
        spec = generate_clustered_spectrum(rng, s, n, kappa_max=10.0 ** rng.uniform(1, 10))
        eps = 10.0 ** rng.uniform(-12, -4)
        report = analyze_spectrum(spec, eps, mode)
        if report.s >= 2:
            split += 1
            assert report.ms <= report.m1, (s, n, spec.kappa, eps)
    assert split >= 20
