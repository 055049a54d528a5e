import os
import time
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from dotenv import load_dotenv

from src.bounds.report import BoundReport
from src.bounds.spectrum import Spectrum, read_spectrum, write_spectrum
from src.estimator.report import final_report
from src.estimator.ritz_estimator import EstimatorConfig, replay
from src.evaluation.metrics import compute_aggregate_metrics
from src.evaluation.sweep import SweepResult, run_sweep
from src.evaluation.synthetic import SYNTH_CSV_FIELDS, run_synthetic_case, run_synthetic_suite
from src.krylov.extremes import RitzExtremes, converge_ritz_extremes
from src.krylov.lanczos import ritz_values
from src.krylov.pcg import pcg
from src.krylov.trace import StopRule, write_trace_csv
from src.partition.greedy import analyze_spectrum
from src.partition.split import AcceptMode
from src.problem.assembly import DiscreteProblem, build_problem, direct_solve
from src.schwarz.decomposition import decompose
from src.schwarz.oracle import spectrum_oracle
from src.schwarz.preconditioner import PreconditionerAssembly, build_preconditioner
from src.utils.config import DEFAULT_EPS, ExperimentConfig
from src.utils.helpers import write_csv, write_json, write_jsonl
from src.utils.logger import get_logger

# Load environment variables from .env file
load_dotenv()

logger = get_logger("PIPELINE")

# ---------------------------------------------------------------------
# Result rows
# ---------------------------------------------------------------------

# wall time stays out of the CSV table so reruns are byte-identical
RESULT_CSV_FIELDS = [
    "H",
    "n_sub",
    "coarse_space",
    "n",
    "coarse_dim",
    "m",
    "status",
    "m1",
    "ms_converged",
    "ms_early",
    "i_early",
    "kappa",
    "kappa_source",
    "s",
    "confidence_label",
    "error",
]


@dataclass
class ResultRow:
    """One (H, coarse space) cell: actual iterations next to the bounds."""

    H: float
    n_sub: int
    coarse_space: str
    n: int
    coarse_dim: int
    m: int
    status: str
    m1: Optional[int]
    ms_converged: Optional[int]
    ms_early: Optional[int]
    i_early: Optional[int]
    kappa: Optional[float]
    kappa_source: str
    s: Optional[int]
    confidence_label: str
    wall_time_s: float
    error: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def cell_dir(out_dir: str, coarse: str, n_sub: int) -> str:
    return os.path.join(out_dir, f"{coarse}_H{n_sub}")


# ---------------------------------------------------------------------
# Problem + preconditioner
# ---------------------------------------------------------------------


def prepare(
    cfg: ExperimentConfig,
    H: Optional[float] = None,
    coarse: Optional[str] = None,
) -> Tuple[DiscreteProblem, PreconditionerAssembly]:
    """Assemble the model problem for one cell and build its preconditioner."""
    problem_cfg = cfg.problem if H is None else cfg.problem.model_copy(update={"H": H})
    coarse = coarse or cfg.preconditioner.coarse_space
    problem = build_problem(problem_cfg)
    dd = decompose(problem.grid, cfg.preconditioner.overlap)
    M = build_preconditioner(problem.A, dd, coarse)
    return problem, M


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------


def cmd_solve(
    cfg: ExperimentConfig,
    H: Optional[float] = None,
    coarse: Optional[str] = None,
    out_dir: Optional[str] = None,
    check_ritz: bool = False,
) -> ResultRow:
    """
    problem -> Schwarz -> PCG -> estimator -> bounds for one cell.

    Artifacts in <out>/<coarse>_H<1/H>/: trace.csv, ritz_spectrum.txt,
    oracle_spectrum.txt (n <= oracle cap), bound_report.json,
    estimator_events.jsonl, comparison.json, row.json; with check_ritz and an
    oracle, ritz_check.json compares converged extreme Ritz values to it.
    Non-convergence is reported through the row's status.
    """
    t0 = time.perf_counter()
    H = cfg.problem.H if H is None else H
    coarse = coarse or cfg.preconditioner.coarse_space
    out_dir = out_dir or cfg.out_dir

    problem, M = prepare(cfg, H, coarse)
    n_sub = problem.grid.n_sub
    target = cell_dir(out_dir, coarse, n_sub)
    os.makedirs(target, exist_ok=True)

    stop = StopRule.from_config(cfg.stop)
    x_ref = direct_solve(problem) if stop.mode == "anorm" else None
    print(f"[SOLVE] H=1/{n_sub} coarse={coarse} n={problem.n} stop={stop.mode} eps={stop.eps:g}")
    _, trace = pcg(problem.A, problem.b, M, stop=stop, x_ref=x_ref)
    write_trace_csv(trace, os.path.join(target, "trace.csv"))

    est_cfg = EstimatorConfig.from_settings(cfg.estimator, coarse, eps=stop.eps, known_m=trace.m)
    state = replay(trace, est_cfg) if cfg.estimator.enabled else None
    if state is not None:
        write_jsonl(state.events, os.path.join(target, "estimator_events.jsonl"))

    oracle: Optional[Spectrum] = None
    if problem.n <= cfg.oracle_cap:
        oracle = spectrum_oracle(problem.A, M, cfg.oracle_cap)
        write_spectrum(oracle, os.path.join(target, "oracle_spectrum.txt"))
        if check_ritz:
            check_ritz_extremes(problem, M, oracle, target, cfg.seed)
    if trace.m > 0:
        write_spectrum(ritz_values(trace), os.path.join(target, "ritz_spectrum.txt"))

    record = final_report(state, trace, est_cfg, oracle=oracle)
    bound = record.oracle_report or record.converged_report
    if bound is not None:
        write_json(bound.to_dict(), os.path.join(target, "bound_report.json"))
    write_json(record.to_dict(), os.path.join(target, "comparison.json"))

    row = ResultRow(
        H=H,
        n_sub=n_sub,
        coarse_space=coarse,
        n=problem.n,
        coarse_dim=M.coarse.dim if M.coarse is not None else 0,
        m=trace.m,
        status=trace.status,
        m1=record.m1,
        ms_converged=record.ms_converged,
        ms_early=record.ms_early,
        i_early=record.i_early,
        kappa=record.kappa,
        kappa_source="oracle" if oracle is not None else "ritz",
        s=record.s,
        confidence_label=record.confidence_label if record.ms_early is not None else "",
        wall_time_s=round(time.perf_counter() - t0, 3),
    )
    write_json(row.to_dict(), os.path.join(target, "row.json"))
    print(
        f"[SOLVE] m={row.m} ({row.status}) m1={row.m1} ms={row.ms_converged} "
        f"ms_early={row.ms_early} at i={row.i_early}"
    )
    return row


def check_ritz_extremes(
    problem: DiscreteProblem,
    M: PreconditionerAssembly,
    oracle: Spectrum,
    target: str,
    seed: int = 0,
) -> RitzExtremes:
    """Converged extreme Ritz values next to the oracle edges -> ritz_check.json."""
    check = converge_ritz_extremes(problem.A, M, seed=seed, oracle=oracle)
    write_json(check.to_dict(), os.path.join(target, "ritz_check.json"))
    print(
        f"[RITZ] lam_min={check.lam_min:.12e} (rel err {check.rel_err_min:.2e}) "
        f"lam_max={check.lam_max:.12e} (rel err {check.rel_err_max:.2e}) after {check.iterations} iterations"
    )
    return check


def solve_cell(cfg: ExperimentConfig, H: float, coarse: str, out_dir: str) -> Dict[str, Any]:
    """Sweep cell: cmd_solve as a plain dict."""
    return cmd_solve(cfg, H=H, coarse=coarse, out_dir=out_dir).to_dict()


def cmd_bound(
    path: str,
    eps: float = DEFAULT_EPS,
    mode: AcceptMode = "exact",
    out_dir: Optional[str] = None,
) -> BoundReport:
    """Bound report for a spectrum file; parse errors carry the line number."""
    spec = read_spectrum(path)
    report = analyze_spectrum(spec, eps, mode)
    if out_dir:
        write_json(report.to_dict(), os.path.join(out_dir, "bound_report.json"))
    print(f"[BOUND] n={report.n} kappa={report.kappa:.6e} s={report.s} m1={report.m1} ms={report.ms}")
    return report


def cmd_spectrum(
    cfg: ExperimentConfig,
    H: Optional[float] = None,
    coarse: Optional[str] = None,
    out_dir: Optional[str] = None,
    check_ritz: bool = False,
) -> Tuple[Spectrum, str]:
    """Oracle spectrum of the preconditioned operator; refuses above the oracle cap."""
    coarse = coarse or cfg.preconditioner.coarse_space
    problem, M = prepare(cfg, H, coarse)
    spec = spectrum_oracle(problem.A, M, cfg.oracle_cap)
    target = cell_dir(out_dir or cfg.out_dir, coarse, problem.grid.n_sub)
    path = os.path.join(target, "oracle_spectrum.txt")
    write_spectrum(spec, path)
    print(f"[SPECTRUM] n={spec.n} lam_min={spec.lam(1):.6e} lam_max={spec.lam(spec.n):.6e} -> {path}")
    if check_ritz:
        check_ritz_extremes(problem, M, spec, target, cfg.seed)
    return spec, path


def cmd_synth(cfg: ExperimentConfig, out_dir: Optional[str] = None) -> Dict[str, Any]:
    """
    Diagonal systems with random clustered spectra (plus any spectrum files in
    the config): CG iterations against m1 and ms from the exact spectrum.
    """
    out_dir = out_dir or cfg.out_dir
    syn = cfg.synthetic
    eps = cfg.stop.eps
    est = EstimatorConfig(
        eta=cfg.estimator.eta,
        tau=cfg.estimator.tau,
        i_max=cfg.estimator.resolved_i_max("none"),
        r=cfg.estimator.r,
        eps=eps,
    )
    rows = run_synthetic_suite(
        cases=syn.cases,
        clusters=syn.clusters,
        n_max=syn.n_max,
        kappa_max=syn.kappa_max,
        seed=cfg.seed,
        eps=eps,
        estimator=est if cfg.estimator.enabled else None,
    )

    failures = 0
    rng = np.random.default_rng(cfg.seed + 1)
    for k, path in enumerate(syn.spectrum_files):
        base = {"case": len(rows), "source": os.path.basename(path), "s_generated": ""}
        try:
            spec = read_spectrum(path)
            rows.append({**base, **run_synthetic_case(spec, rng, eps, est if cfg.estimator.enabled else None)})
        except Exception as e:
            failures += 1
            logger.error("spectrum file %s failed: %s", path, e)
            rows.append({**base, "status": "failed"})

    ok = [r for r in rows if r.get("status") != "failed"]
    summary = {
        "cases": len(rows),
        "failures": failures,
        "sound_rate": sum(1 for r in ok if r["sound"]) / len(ok) if ok else None,
        "verified_rate": sum(1 for r in ok if r["verified"]) / len(ok) if ok else None,
        "bounds": compute_aggregate_metrics([{**r, "ms_converged": r.get("ms")} for r in ok]),
    }
    write_csv(rows, os.path.join(out_dir, "synth_runs.csv"), fieldnames=SYNTH_CSV_FIELDS)
    write_json(summary, os.path.join(out_dir, "synth_summary.json"))
    print(f"[SYNTH] {len(rows)} case(s): sound={summary['sound_rate']} verified={summary['verified_rate']}")
    return {"rows": rows, "summary": summary, "failures": failures}


def cmd_sweep(cfg: ExperimentConfig, out_dir: Optional[str] = None) -> SweepResult:
    """cmd_solve for every (H, coarse space) cell; per-cell failures are recorded, not raised."""
    result = run_sweep(cfg, solve_cell, RESULT_CSV_FIELDS, out_dir=out_dir)
    print(f"[SWEEP] {len(result.rows)} cell(s), {result.failures} failed -> {result.table_path}")
    return result


if __name__ == "__main__":
    from src.utils.config import build_experiment_config

    # Simple smoke test: tiny grid, GDSW, oracle-sized
    smoke = build_experiment_config({"problem": {"H": 0.5, "H_over_h": 8}, "out_dir": "results/smoke"})
    r = cmd_solve(smoke)
    print(r.to_dict())
