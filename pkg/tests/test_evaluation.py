import numpy as np
import pytest

from src.evaluation.metrics import (
    aggregate_by,
    bound_marker,
    coarse_space_ratios,
    compute_aggregate_metrics,
    compute_row_metrics,
)
from src.evaluation.sweep import long_format, sweep_cells
from src.evaluation.synthetic import generate_clustered_spectrum, run_synthetic_case
from src.utils.config import build_experiment_config


# ---------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "bound, m, marker",
    [(100, 80, "over"), (50, 80, "under"), (80, 80, "match"), (None, 80, ""), ("", 80, "")],
)
def test_bound_marker(bound, m, marker):
    assert bound_marker(bound, m) == marker


def test_row_metrics():
    out = compute_row_metrics({"m": 80, "m1": 8000, "ms_converged": 160, "ms_early": None})
    assert out["m1_over_m"] == 100.0
    assert out["ms_converged_over_m"] == 2.0
    assert out["ms_early_over_m"] is None
    assert out["ms_converged_vs_m"] == "over"
    assert out["ms_early_vs_m"] == ""


def test_aggregates_skip_failed_rows():
    rows = [
        {"coarse_space": "gdsw", "m": 10, "m1": 100, "ms_converged": 20},
        {"coarse_space": "gdsw", "m": 10, "m1": 1000, "ms_converged": 5},
        {"coarse_space": "rgdsw", "status": "failed"},
    ]
    agg = compute_aggregate_metrics(rows)
    assert agg["n"] == 3
    assert agg["failed"] == 1
    assert agg["m1_over_m_geomean"] == pytest.approx(np.sqrt(10.0 * 100.0))
    assert agg["ms_converged_at_least_m_rate"] == 0.5
    by = aggregate_by(rows, "coarse_space")
    assert list(by) == ["gdsw", "rgdsw"]
    assert by["rgdsw"]["m1_over_m_geomean"] is None


def test_coarse_space_ratios_need_both_cells():
    rows = [
        {"H": 0.25, "coarse_space": "gdsw", "m": 20, "m1": 4000, "ms_converged": 40},
        {"H": 0.25, "coarse_space": "rgdsw", "m": 30, "m1": 5000, "ms_converged": 120},
        {"H": 0.125, "coarse_space": "gdsw", "m": 22, "m1": 4100, "ms_converged": 44},
        {"H": 0.125, "coarse_space": "rgdsw", "status": "failed"},
    ]
    ratios = coarse_space_ratios(rows, [0.25, 0.125])
    assert list(ratios) == ["1/4"]
    assert ratios["1/4"] == {"m": 1.5, "m1": 1.25, "ms_converged": 3.0}


# ---------------------------------------------------------------------
# Sweep plumbing
# ---------------------------------------------------------------------


def test_sweep_cells_are_h_major():
    cfg = build_experiment_config({"H_list": [0.25, 0.125], "coarse_spaces": ["gdsw", "rgdsw"]})
    assert sweep_cells(cfg) == [(0.25, "gdsw"), (0.25, "rgdsw"), (0.125, "gdsw"), (0.125, "rgdsw")]


def test_long_format_drops_missing_quantities():
    rows = [{"H": 0.25, "coarse_space": "gdsw", "m": 80, "m1": 9000, "ms_converged": 120, "ms_early": None}]
    long = long_format(rows)
    assert [r["quantity"] for r in long] == ["m", "m1", "ms_converged"]


# ---------------------------------------------------------------------
# Synthetic spectra
# ---------------------------------------------------------------------


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_generated_spectrum_shape(s):
    rng = np.random.default_rng(s)
    spec = generate_clustered_spectrum(rng, s, 60, kappa_max=1e10)
    assert spec.n == 60
    assert spec.lam(1) == 1.0
    assert spec.kappa <= 1e10 * (1 + 1e-12)


def test_generator_rejects_too_few_values():
    with pytest.raises(ValueError):
        generate_clustered_spectrum(np.random.default_rng(0), 3, 10)


def test_synthetic_case_row():
    rng = np.random.default_rng(0)
    spec = generate_clustered_spectrum(rng, 2, 30, kappa_max=1e6)
    row = run_synthetic_case(spec, rng)
    assert row["status"] == "converged"
    assert row["verified"]
    assert row["m"] <= row["m1"]
