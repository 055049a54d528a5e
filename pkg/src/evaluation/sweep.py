import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

from src.evaluation.metrics import aggregate_by, compute_row_metrics
from src.utils.config import ExperimentConfig, build_experiment_config
from src.utils.helpers import write_csv, write_json
from src.utils.logger import get_logger

logger = get_logger("SWEEP")

# cell_fn(config, H, coarse_space, out_dir) -> result row as a dict
CellFn = Callable[[ExperimentConfig, float, str, str], Dict[str, Any]]

LONG_FIELDS = ["H", "coarse_space", "quantity", "value"]
LONG_QUANTITIES = ("m", "m1", "ms_converged", "ms_early")


@dataclass
class SweepResult:
    rows: List[Dict[str, Any]] = field(default_factory=list)
    table_path: str = ""
    long_path: str = ""
    summary_path: str = ""

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.get("status") == "failed")


def sweep_cells(cfg: ExperimentConfig) -> List[Tuple[float, str]]:
    """(H, coarse space) pairs, H-major, in config order."""
    return [(H, coarse) for H in cfg.H_list for coarse in cfg.coarse_spaces]


def _run_cell(cell_fn: CellFn, raw_cfg: Dict[str, Any], H: float, coarse: str, out_dir: str) -> Dict[str, Any]:
    # module-level so a process pool can pickle it; never raises
    try:
        cfg = build_experiment_config(raw_cfg)
        row = cell_fn(cfg, H, coarse, out_dir)
    except Exception as e:
        logger.error("cell H=%s %s failed: %s", H, coarse, e)
        logger.debug(traceback.format_exc())
        row = {"H": H, "coarse_space": coarse, "status": "failed", "error": f"{type(e).__name__}: {e}"}
    row.update(compute_row_metrics(row))
    return row


def long_format(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """(H, coarse_space, quantity, value) records for external plotting."""
    out: List[Dict[str, Any]] = []
    for r in rows:
        for q in LONG_QUANTITIES:
            v = r.get(q)
            if v is None or v == "":
                continue
            out.append({"H": r["H"], "coarse_space": r["coarse_space"], "quantity": q, "value": v})
    return out


def run_sweep(
    cfg: ExperimentConfig,
    cell_fn: CellFn,
    fieldnames: List[str],
    out_dir: Optional[str] = None,
    prefix: str = "sweep",
) -> SweepResult:
    """
    Run every (H, coarse space) cell, up to cfg.jobs in parallel. Row order is
    the cell order regardless of completion order; a failing cell becomes a
    row with status "failed" and the sweep continues.
    """
    out_dir = out_dir or cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    cells = sweep_cells(cfg)
    raw = cfg.model_dump()
    logger.info("%d cell(s), jobs=%d -> %s", len(cells), cfg.jobs, out_dir)

    rows: List[Dict[str, Any]] = []
    if cfg.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_run_cell, cell_fn, raw, H, c, out_dir) for H, c in cells]
            rows = [f.result() for f in tqdm(futures, desc="sweep", unit="cell")]
    else:
        for H, c in tqdm(cells, desc="sweep", unit="cell"):
            rows.append(_run_cell(cell_fn, raw, H, c, out_dir))

    table_fields = fieldnames + [k for k in compute_row_metrics({}) if k not in fieldnames]

    result = SweepResult(
        rows=rows,
        table_path=os.path.join(out_dir, f"{prefix}_table.csv"),
        long_path=os.path.join(out_dir, f"{prefix}_long.csv"),
        summary_path=os.path.join(out_dir, f"{prefix}_summary.json"),
    )
    write_csv(rows, result.table_path, fieldnames=table_fields)
    write_csv(long_format(rows), result.long_path, fieldnames=LONG_FIELDS)
    write_json(
        {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "H_list": cfg.H_list,
            "coarse_spaces": list(cfg.coarse_spaces),
            "eps": cfg.stop.eps,
            "stop_mode": cfg.stop.mode,
            "cells": len(rows),
            "failures": result.failures,
            "by_coarse_space": aggregate_by(rows, "coarse_space"),
        },
        result.summary_path,
    )
    logger.info("wrote %s (%d rows, %d failed)", result.table_path, len(rows), result.failures)
    return result
