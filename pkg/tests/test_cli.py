import csv
import json

import pytest

from src.bounds.spectrum import read_spectrum
from src.cli import EXIT_CELL_FAILURES, EXIT_OK, EXIT_USAGE, main
from src.main import cmd_bound, cmd_solve
from src.utils.config import build_experiment_config

TINY = {
    "problem": {"H": 0.5, "H_over_h": 4, "inclusions_per_edge": 1, "channel_len": 1, "contrast": 1e4},
    "coarse_spaces": ["gdsw"],
}


def _write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------


def test_bound_on_a_valid_file(tmp_path):
    spec = tmp_path / "spec.txt"
    spec.write_text("1.0\n1.5\n2.0\n1e6\n2e6\n")
    assert main(["--out", str(tmp_path), "bound", str(spec)]) == EXIT_OK
    report = json.loads((tmp_path / "bound_report.json").read_text())
    assert report["s"] == 2


def test_bound_on_a_bad_file(tmp_path):
    spec = tmp_path / "spec.txt"
    spec.write_text("1.0\n2.0\nnot-a-number\n")
    assert main(["bound", str(spec)]) == EXIT_USAGE


def test_bound_on_a_missing_file(tmp_path):
    assert main(["bound", str(tmp_path / "nope.txt")]) == EXIT_USAGE


def test_argument_errors():
    assert main([]) == EXIT_USAGE
    assert main(["solve", "--coarse", "bddc"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_config_errors(tmp_path):
    assert main(["--config", str(tmp_path / "missing.json"), "synth"]) == EXIT_USAGE
    bad = _write_config(tmp_path, {"problem": {"H": 0.3}})
    assert main(["--config", bad, "synth"]) == EXIT_USAGE
    unknown = _write_config(tmp_path, {"preconditioner": {"coarse": "gdsw"}})
    assert main(["--config", unknown, "synth"]) == EXIT_USAGE


def test_eps_flag_is_validated(tmp_path):
    assert main(["--eps", "2.0", "--out", str(tmp_path), "synth", "--cases", "0"]) == EXIT_USAGE


def test_spectrum_above_oracle_cap(tmp_path):
    cfg = _write_config(tmp_path, TINY)
    assert main(["--config", cfg, "--oracle-cap", "10", "--out", str(tmp_path), "spectrum"]) == EXIT_USAGE


def test_synth_with_a_failing_spectrum_file(tmp_path):
    cfg = _write_config(tmp_path, {"synthetic": {"cases": 0, "spectrum_files": [str(tmp_path / "gone.txt")]}})
    assert main(["--config", cfg, "--out", str(tmp_path), "synth"]) == EXIT_CELL_FAILURES


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------


def test_sweep_with_no_cells(tmp_path):
    assert main(["--out", str(tmp_path), "sweep"]) == EXIT_OK
    assert (tmp_path / "sweep_table.csv").exists()
    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert summary["cells"] == 0
    assert summary["failures"] == 0


def test_synth_writes_runs_and_summary(tmp_path):
    cfg = _write_config(tmp_path, {"synthetic": {"n_max": 30, "kappa_max": 1e6, "clusters": [1, 2]}})
    assert main(["--config", cfg, "--out", str(tmp_path), "--seed", "7", "synth", "--cases", "2"]) == EXIT_OK
    with open(tmp_path / "synth_runs.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 2
    summary = json.loads((tmp_path / "synth_summary.json").read_text())
    assert summary["cases"] == 2
    assert summary["failures"] == 0


def test_solve_writes_cell_artifacts(tmp_path):
    cfg = build_experiment_config(TINY, out_dir=str(tmp_path))
    row = cmd_solve(cfg)
    cell = tmp_path / "gdsw_H2"
    for name in (
        "trace.csv",
        "oracle_spectrum.txt",
        "ritz_spectrum.txt",
        "bound_report.json",
        "estimator_events.jsonl",
        "comparison.json",
        "row.json",
    ):
        assert (cell / name).exists(), name
    assert row.status == "converged"
    assert row.kappa_source == "oracle"
    assert row.coarse_dim == 5
    assert row.m <= row.ms_converged
    assert row.m <= row.m1
    assert not (cell / "ritz_check.json").exists()


def test_spectrum_command_checks_ritz_extremes(tmp_path):
    cfg = _write_config(tmp_path, TINY)
    assert main(["--config", cfg, "--out", str(tmp_path), "spectrum", "--check-ritz"]) == EXIT_OK
    cell = tmp_path / "gdsw_H2"
    oracle = read_spectrum(str(cell / "oracle_spectrum.txt"))
    check = json.loads((cell / "ritz_check.json").read_text())
    assert check["oracle_min"] == oracle.lam(1)
    assert check["rel_err_min"] <= 1e-6
    assert check["rel_err_max"] <= 1e-6


def test_bound_command_reproduces_the_solve_report(tmp_path):
    cfg = build_experiment_config(TINY, out_dir=str(tmp_path))
    cmd_solve(cfg)
    cell = tmp_path / "gdsw_H2"
    stored = json.loads((cell / "bound_report.json").read_text())
    report = cmd_bound(str(cell / "oracle_spectrum.txt"), eps=cfg.stop.eps)
    assert report.ms == stored["ms"]
    assert report.m1 == stored["m1"]
    assert report.partition == stored["partition"]
    assert read_spectrum(str(cell / "oracle_spectrum.txt")).n == 49


def test_sweep_table_is_reproducible(tmp_path):
    cfg = _write_config(tmp_path, {**TINY, "H_list": [0.5]})
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["--config", cfg, "--out", str(out_a), "sweep"]) == EXIT_OK
    assert main(["--config", cfg, "--out", str(out_b), "sweep"]) == EXIT_OK
    table_a = (out_a / "sweep_table.csv").read_text()
    assert table_a == (out_b / "sweep_table.csv").read_text()
    with open(out_a / "sweep_long.csv", newline="", encoding="utf-8") as f:
        quantities = {r["quantity"] for r in csv.DictReader(f)}
    assert {"m", "m1", "ms_converged"} <= quantities


@pytest.mark.slow
def test_sweep_runs_cells_in_parallel(tmp_path):
    cfg = _write_config(tmp_path, {**TINY, "H_list": [0.5], "coarse_spaces": ["gdsw", "rgdsw", "none"]})
    assert main(["--config", cfg, "--jobs", "2", "--out", str(tmp_path), "sweep"]) == EXIT_OK
    with open(tmp_path / "sweep_table.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert [r["coarse_space"] for r in rows] == ["gdsw", "rgdsw", "none"]
