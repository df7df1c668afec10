"""Command line entry point: ``idealsdp <subcommand> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .config import EXPERIMENTS, default_config, load_config, with_overrides
from .errors import ConfigError, SolverFailure
from .experiments import ExperimentResult, run

_HELP = {
    "design": "solve a restricted design described by --config",
    "example1": "sixteen-null sector design versus the SDR baseline",
    "example2": "single null at multiplicity 1 and 3 versus the SDR baseline",
    "gsc": "build and check a blocking matrix",
    "subspace": "Monte-Carlo comparison of root clustering and root-MUSIC",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealsdp",
        description="Rank-constrained beampattern design via polynomial ideals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--out", help="output directory (default: results)")
        p.add_argument("--grid-step", type=float, help="angle grid step in degrees")
        p.add_argument("--gamma", type=float, help="positive-definiteness floor")
        p.add_argument("--seed", type=int, help="RNG seed for simulations")
    return parser


def _print_summary(res: ExperimentResult) -> None:
    for name, rep in res.reports.items():
        m = rep.metrics
        print(
            f"{name:>10}: ASL {m.asl_db:8.2f} dB  PSL {m.psl_db:8.2f} dB  "
            f"MSE {m.mse:.4g}  ripple {m.ripple_db:.3f} dB  "
            f"worst null {m.worst_null_db:8.2f} dB"
        )
    for key, value in res.summary.items():
        if key.endswith("_asl_gap_db") or key == "sdr_condition_number":
            print(f"{key}: {value:.4g}")
    if res.experiment == "gsc":
        print(f"blocking rows: {res.summary['rows']}  max residual on blocked "
              f"directions: {res.summary['max_blocked_residual']:.3e}")
    if res.experiment == "subspace":
        for method, v in res.summary["rmse_deg"].items():
            print(f"{method:>10}: RMSE {v:.4f} deg")
    for path in res.files:
        print(f"wrote {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config, experiment=args.command)
        else:
            cfg = default_config(args.command)
        cfg = with_overrides(cfg, args.out, args.grid_step, args.gamma, args.seed)
        res = run(cfg)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _print_summary(res)
    return 0


if __name__ == "__main__":
    sys.exit(main())
