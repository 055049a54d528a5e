import json
import math

import numpy as np
import pytest

from conftest import two_cluster_spectrum
from src.bounds.chebyshev import (
    ClusterInterval,
    affine_map,
    log_abs_cheb,
    log_abs_scaled_cheb,
    log_growth_rate,
    log_inv_gamma,
)
from src.bounds.iteration_bounds import ClusterPolynomial, cluster_degrees, m1, m2, ms, verify_polynomial
from src.bounds.report import build_bound_report
from src.bounds.spectrum import ClusterPartition, Spectrum, parse_spectrum_lines, read_spectrum, write_spectrum
from src.partition.greedy import analyze_spectrum
from src.utils.errors import SpectrumParseError


# ---------------------------------------------------------------------
# Classical bound
# ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "kappa, eps, expected",
    [
        (100.0, 1e-8, 96),
        (1e8, 1e-8, 95570),
        (1.0, 1e-8, 10),
    ],
)
def test_m1_known_values(kappa, eps, expected):
    assert m1(kappa, eps) == expected


def test_m1_rejects_kappa_below_one():
    with pytest.raises(ValueError):
        m1(0.5, 1e-8)


def test_m2_beats_m1_for_separated_clusters():
    assert m2(2e6, 2.0, 2.0, 1e-8) < m1(2e6, 1e-8)


# ---------------------------------------------------------------------
# Chebyshev factors
# ---------------------------------------------------------------------


def test_log_inv_gamma():
    assert math.isclose(log_inv_gamma(4.0), math.log(3.0), rel_tol=1e-14)
    assert log_inv_gamma(1.0) == math.inf
    # large kappa keeps relative accuracy
    assert math.isclose(log_inv_gamma(1e10), math.log((1e5 + 1.0) / (1e5 - 1.0)), rel_tol=1e-9)


def test_log_inv_gamma_within_an_ulp_of_one():
    kappa = math.nextafter(1.0, 2.0)
    assert math.sqrt(kappa) == 1.0
    value = log_inv_gamma(kappa)
    assert math.isfinite(value)
    assert math.isclose(value, math.log(4.0 / (kappa - 1.0)), rel_tol=1e-12)
    assert math.isclose(log_inv_gamma(2.0), math.log((math.sqrt(2.0) + 1.0) / (math.sqrt(2.0) - 1.0)), rel_tol=1e-14)


def test_near_unit_cluster_is_bounded_and_verified():
    spec = Spectrum([1.0, math.nextafter(1.0, 2.0)])
    report = analyze_spectrum(spec, 1e-8)
    assert report.verification["passed"]
    assert report.ms >= 1


def test_log_abs_cheb_inside_and_outside():
    assert math.isclose(log_abs_cheb(3, 0.5), 0.0, abs_tol=1e-14)
    assert math.isclose(log_abs_cheb(2, 3.0), math.log(17.0), rel_tol=1e-14)
    assert log_abs_cheb(3, 0.0) == -math.inf


def test_log_abs_cheb_does_not_overflow():
    value = log_abs_cheb(50000, 1e9)
    assert math.isfinite(value)
    assert math.isclose(value, 50000 * math.acosh(1e9) - math.log(2.0), rel_tol=1e-12)


def test_affine_map_endpoints():
    iv = ClusterInterval(2.0, 6.0)
    assert affine_map(iv, 2.0) == -1.0
    assert affine_map(iv, 6.0) == 1.0
    assert affine_map(iv, 0.0) == -2.0


def test_scaled_factor_is_one_at_origin_and_small_on_interval():
    iv = ClusterInterval(1.0, 4.0)
    assert log_abs_scaled_cheb(iv, 7, 0.0) == 0.0
    lam = np.linspace(1.0, 4.0, 101)
    vals = log_abs_scaled_cheb(iv, 7, lam)
    bound = -math.log(math.cosh(7 * math.log(3.0)))
    assert np.all(vals <= bound + 1e-12)


def test_singleton_factor_vanishes_at_its_point():
    iv = ClusterInterval(5.0, 5.0)
    assert log_abs_scaled_cheb(iv, 1, 5.0) == -math.inf
    assert math.isclose(log_abs_scaled_cheb(iv, 1, 10.0), 0.0, abs_tol=1e-15)


def test_growth_rate_bounds_the_factor_above_the_interval():
    iv = ClusterInterval(1.0, 2.0)
    lam = 1e6
    rate = log_growth_rate(iv, lam)
    for p in (1, 5, 20):
        assert log_abs_scaled_cheb(iv, p, lam) <= p * rate + 1e-9


# ---------------------------------------------------------------------
# Multi-cluster degrees
# ---------------------------------------------------------------------


def test_singleton_spectrum_needs_one_iteration():
    spec = Spectrum(np.array([5.0]))
    poly = cluster_degrees(spec, ClusterPartition.single(spec), 1e-8)
    assert ms(poly) == 1
    assert verify_polynomial(spec, poly, 1e-8).passed


def test_repeated_eigenvalue_is_one_singleton():
    spec = Spectrum(np.full(4, 3.0))
    report = build_bound_report(cluster_degrees(spec, ClusterPartition.single(spec), 1e-8))
    assert report.ms == 1
    assert report.m1 == m1(1.0, 1e-8)


def test_two_cluster_degrees_verify_and_beat_m1():
    spec = two_cluster_spectrum()
    part = ClusterPartition(spec, (0, 10, 20))
    poly = cluster_degrees(spec, part, 1e-8)
    check = verify_polynomial(spec, poly, 1e-8)
    assert check.passed
    assert check.edges_passed
    assert ms(poly) < m1(spec.kappa, 1e-8)
    # lower cluster alone: ceil(ln(2/eps) / ln(inv gamma(2)))
    assert poly.degrees[0] == math.ceil(math.log(2e8) / log_inv_gamma(2.0))


def test_starved_upper_degree_fails_verification():
    spec = two_cluster_spectrum()
    part = ClusterPartition(spec, (0, 10, 20))
    good = cluster_degrees(spec, part, 1e-8)
    bad = ClusterPolynomial(part, (good.degrees[0], 1), 1e-8)
    assert not verify_polynomial(spec, bad, 1e-8).passed


def test_single_cluster_degree_matches_m1_up_to_rounding():
    spec = Spectrum(np.linspace(1.0, 1e4, 200))
    poly = cluster_degrees(spec, ClusterPartition.single(spec), 1e-6)
    assert abs(ms(poly) - m1(spec.kappa, 1e-6)) <= 1
    assert verify_polynomial(spec, poly, 1e-6).passed


def test_partition_rejects_split_inside_duplicates():
    spec = Spectrum(np.array([1.0, 2.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        ClusterPartition(spec, (0, 2, 4))


def test_bound_report_is_strict_json():
    spec = Spectrum(np.array([5.0]))
    report = build_bound_report(cluster_degrees(spec, ClusterPartition.single(spec), 1e-8))
    data = json.loads(report.to_json())
    assert data["ms"] == 1
    assert data["verification"]["max_log_abs_r"] is None
    assert report.csv_row()["m2"] == ""


# ---------------------------------------------------------------------
# Spectrum files
# ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "lines, line_no",
    [
        (["1.0", "0.5"], 2),
        (["1.0", "-2.0"], 2),
        (["", "# header", "abc"], 3),
        (["0"], 1),
        (["1.0", "inf"], 2),
    ],
)
def test_parse_spectrum_reports_offending_line(lines, line_no):
    with pytest.raises(SpectrumParseError) as exc:
        parse_spectrum_lines(lines)
    assert exc.value.line_no == line_no


def test_parse_spectrum_empty_file():
    with pytest.raises(SpectrumParseError):
        parse_spectrum_lines(["# nothing here", ""])


def test_parse_spectrum_keeps_duplicates_and_comments():
    spec = parse_spectrum_lines(["1.0  # smallest", "1.0", "", "4.5"])
    assert spec.values.tolist() == [1.0, 1.0, 4.5]


def test_spectrum_file_is_exact(tmp_path, rng):
    spec = Spectrum.from_unsorted(rng.uniform(1.0, 1e9, 50))
    path = tmp_path / "spec.txt"
    write_spectrum(spec, str(path))
    assert np.array_equal(read_spectrum(str(path)).values, spec.values)
