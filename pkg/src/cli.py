"""
Command-line surface.

    python -m src.cli [--config PATH] [--out DIR] [--seed N] [--eps FLOAT]
                      [--oracle-cap N] [--mode residual|anorm] [--jobs N]
                      {solve,sweep,bound,spectrum,synth} ...

Exit codes: 0 success, 1 per-cell failures, 2 config or parse error.
"""
import argparse
import json
import sys
from typing import List, Optional

from src.main import cmd_bound, cmd_solve, cmd_spectrum, cmd_sweep, cmd_synth
from src.utils.config import ExperimentConfig, load_experiment_config
from src.utils.errors import ConfigError, LambertDomainError, OracleCapExceededError, SpectrumParseError
from src.utils.logger import get_logger

logger = get_logger("CLI")

EXIT_OK = 0
EXIT_CELL_FAILURES = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterbound", description="Multi-cluster PCG iteration bounds")
    p.add_argument("--config", help="experiment config (JSON)")
    p.add_argument("--out", dest="out_dir", help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int)
    p.add_argument("--mode", choices=["residual", "anorm"], help="PCG stopping rule")
    p.add_argument("--jobs", type=int, help="parallel sweep cells")

    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="one (H, coarse space) cell")
    solve.add_argument("--H", type=float)
    solve.add_argument("--coarse", choices=["gdsw", "rgdsw", "none"])
    solve.add_argument(
        "--check-ritz", dest="check_ritz", action="store_true", help="converge extreme Ritz values against the oracle"
    )

    sweep = sub.add_parser("sweep", help="all cells of the config's H list")
    sweep.add_argument("--H", type=float, action="append", dest="H_list", help="repeatable; overrides H_list")

    bound = sub.add_parser("bound", help="bound report for a spectrum file")
    bound.add_argument("spectrum_file")
    bound.add_argument("--accept", choices=["exact", "expansion", "m2"], default="exact")

    spectrum = sub.add_parser("spectrum", help="oracle spectrum of the preconditioned operator")
    spectrum.add_argument("--H", type=float)
    spectrum.add_argument("--coarse", choices=["gdsw", "rgdsw", "none"])
    spectrum.add_argument(
        "--check-ritz", dest="check_ritz", action="store_true", help="converge extreme Ritz values against the oracle"
    )

    synth = sub.add_parser("synth", help="randomized clustered spectra on diagonal systems")
    synth.add_argument("--cases", type=int)

    return p


def _config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_experiment_config(
        args.config,
        eps=args.eps,
        mode=args.mode,
        seed=args.seed,
        out_dir=args.out_dir,
        oracle_cap=args.oracle_cap,
        jobs=args.jobs,
    )
    if getattr(args, "H_list", None):
        cfg = cfg.model_copy(update={"H_list": list(args.H_list)})
    if getattr(args, "cases", None) is not None:
        cfg = cfg.model_copy(update={"synthetic": cfg.synthetic.model_copy(update={"cases": args.cases})})
    return cfg


def run(args: argparse.Namespace) -> int:
    cfg = _config(args)

    if args.command == "solve":
        row = cmd_solve(cfg, H=args.H, coarse=args.coarse, check_ritz=args.check_ritz)
        print(json.dumps(row.to_dict(), indent=2))
        return EXIT_OK

    if args.command == "sweep":
        result = cmd_sweep(cfg)
        return EXIT_CELL_FAILURES if result.failures else EXIT_OK

    if args.command == "bound":
        report = cmd_bound(args.spectrum_file, eps=cfg.stop.eps, mode=args.accept, out_dir=args.out_dir)
        print(report.to_json())
        return EXIT_OK

    if args.command == "spectrum":
        cmd_spectrum(cfg, H=args.H, coarse=args.coarse, check_ritz=args.check_ritz)
        return EXIT_OK

    if args.command == "synth":
        out = cmd_synth(cfg)
        return EXIT_CELL_FAILURES if out["failures"] else EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return run(args)
    except (ConfigError, SpectrumParseError, OracleCapExceededError, LambertDomainError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error("%s failed: %s: %s", args.command, type(e).__name__, e)
        return EXIT_CELL_FAILURES


if __name__ == "__main__":
    sys.exit(main())
