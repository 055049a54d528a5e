"""
GDSW against RGDSW across subdomain sizes H, one cell per (H, coarse space).

    python scripts/run_sweep.py [--config configs/sweep.json] [--H 0.25 --H 0.125]

Writes results/sweep_runs.csv (rows with bound/m ratios) and
results/sweep_summary.json (aggregates plus rgdsw/gdsw ratios per H).
"""
import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from dotenv import load_dotenv

# run from a checkout without installing the package
ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

load_dotenv()

from src.evaluation.metrics import coarse_space_ratios, compute_aggregate_metrics, compute_row_metrics  # noqa: E402
from src.main import RESULT_CSV_FIELDS, solve_cell  # noqa: E402
from src.utils.config import build_experiment_config  # noqa: E402
from src.utils.helpers import write_csv, write_json  # noqa: E402

# Coarse spaces compared cell by cell across subdomain sizes
H_LIST: List[float] = [1 / 4, 1 / 8, 1 / 16]
VARIANTS: List[str] = ["gdsw", "rgdsw"]

OUT_DIR = "results"
OUT_CSV = os.path.join(OUT_DIR, "sweep_runs.csv")
OUT_JSON = os.path.join(OUT_DIR, "sweep_summary.json")


def run_one(H: float, variant: str, base: Dict[str, Any]) -> Dict[str, Any]:
    cfg = build_experiment_config(base)
    try:
        row = solve_cell(cfg, H, variant, cfg.out_dir)
    except Exception as e:
        row = {"H": H, "coarse_space": variant, "status": "failed", "error": f"{type(e).__name__}: {e}"}
    row.update(compute_row_metrics(row))
    return row


def main() -> None:
    parser = argparse.ArgumentParser(description="GDSW vs RGDSW across H")
    parser.add_argument("--config", help="experiment config (JSON)")
    parser.add_argument("--H", type=float, action="append", help="repeatable; default 1/4, 1/8, 1/16")
    args = parser.parse_args()

    base: Dict[str, Any] = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            base = json.load(f)
    base.setdefault("out_dir", OUT_DIR)
    H_list = args.H or H_LIST

    os.makedirs(OUT_DIR, exist_ok=True)

    rows: List[Dict[str, Any]] = []
    for H in H_list:
        print(f"\n[H] 1/{round(1 / H)}")
        for variant in VARIANTS:
            r = run_one(H, variant, base)
            print(
                f"  {variant:>5}: m={r.get('m')} m1={r.get('m1')} ms={r.get('ms_converged')} "
                f"ms_early={r.get('ms_early')} status={r.get('status')}"
            )
            rows.append(r)

    fields = RESULT_CSV_FIELDS + [k for k in compute_row_metrics({}) if k not in RESULT_CSV_FIELDS]
    write_csv(rows, OUT_CSV, fieldnames=fields)

    def agg(variant: str) -> Dict[str, Any]:
        return compute_aggregate_metrics([r for r in rows if r["coarse_space"] == variant])

    ratios = coarse_space_ratios(rows, H_list)

    summary = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "H_list": H_list,
        "gdsw": agg("gdsw"),
        "rgdsw": agg("rgdsw"),
        "rgdsw_over_gdsw": ratios,
        "notes": {
            "ratio_definition": "rgdsw value / gdsw value for the same H",
            "marker_definition": "over: bound > m, under: bound < m, match: equal",
        },
    }
    write_json(summary, OUT_JSON)

    print("\n[SWEEP] Wrote:")
    print(f" - {OUT_CSV}")
    print(f" - {OUT_JSON}")


if __name__ == "__main__":
    main()
