"""
Experiment runners behind the command line.

Each runner takes an :class:`~idealsdp.config.ExperimentConfig`, solves or
simulates, optionally writes its files to ``cfg.out_dir`` and returns an
:class:`ExperimentResult`.  Written files never contain timings, so identical
configs give identical files.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .array_model import ArrayGeometry, make_grid, variety_from_directions
from .config import ExperimentConfig, default_config
from .errors import ConfigError, SolverFailure
from .gsc import blocking_matrix, verify_blocking
from .metrics import BeampatternReport, write_rows_csv
from .polyideal import extend_variety
from .restriction import DesignSpec, solve_restricted, solve_sdr_baseline
from .sdp_solver import SolverOptions
from .subspace_id import (
    SnapshotModel,
    eigendecompose,
    estimate_directions,
    monte_carlo,
    rmse,
    root_music_baseline,
    sample_covariance,
    select_noise_subspace,
)

__all__ = [
    "ExperimentResult",
    "build_specs",
    "solver_options",
    "run_design",
    "run_example1",
    "run_example2",
    "run_gsc",
    "run_subspace",
    "run",
]


@dataclass
class ExperimentResult:
    experiment: str
    reports: dict = field(default_factory=dict)
    solutions: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def __getitem__(self, method: str) -> BeampatternReport:
        return self.reports[method]


def solver_options(cfg: ExperimentConfig) -> SolverOptions:
    s = cfg.solver
    return SolverOptions(
        gap_tol=s.gap_tol, feas_tol=s.feas_tol, max_iter=s.max_iter, verbose=s.verbose
    )


def _geometry(cfg: ExperimentConfig) -> ArrayGeometry:
    return ArrayGeometry(cfg.array.N, cfg.array.spacing)


def build_specs(cfg: ExperimentConfig) -> list[tuple[int, DesignSpec]]:
    """One design spec per configured null multiplicity."""
    d = cfg.design
    if not d.null_directions:
        raise ConfigError("design.null_directions is empty")
    geom = _geometry(cfg)
    base = variety_from_directions(geom, list(d.null_directions))
    grid = make_grid(d.passband, d.transition, d.grid_step, include=d.null_directions)
    specs = []
    for m in d.multiplicities:
        V = extend_variety(base, int(m) * len(base))
        specs.append(
            (
                int(m),
                DesignSpec(
                    geom=geom,
                    passband=d.passband,
                    variety=V,
                    K=geom.N - len(V),
                    transition=d.transition,
                    E=d.E,
                    gamma=d.gamma,
                    grid=grid,
                    desired_level=d.desired_level,
                    power=d.power,
                ),
            )
        )
    return specs


def _method_name(cfg: ExperimentConfig, m: int) -> str:
    return "proposed" if len(cfg.design.multiplicities) == 1 else f"mult{m}"


def _write_summary(out_dir, experiment: str, summary: dict) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{experiment}_summary.json"
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def run_design(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Restricted designs for every multiplicity, plus the SDR baseline if enabled."""
    opts = solver_options(cfg)
    res = ExperimentResult(cfg.experiment)
    specs = build_specs(cfg)
    d = cfg.design
    for m, spec in specs:
        name = _method_name(cfg, m)
        t0 = time.perf_counter()
        sol = solve_restricted(spec, opts)
        res.timings[name] = time.perf_counter() - t0
        if sol.sdp.status != "optimal":
            raise SolverFailure(f"{cfg.experiment}/{name}", sol.sdp.status, sol.sdp.message)
        X = sol.sdp.X
        info = {
            "status": sol.sdp.status,
            "t": sol.sdp.t,
            "iterations": sol.sdp.iterations,
            "duality_gap": sol.sdp.duality_gap,
            "K": spec.K,
            "L": len(spec.variety),
            "multiplicity": m,
            "gamma": spec.gamma,
            "power": spec.power,
            "min_eig_X": float(np.linalg.eigvalsh(X)[0]),
            "W_sigma_min": float(np.linalg.svd(sol.W, compute_uv=False)[-1]),
            "W_columns": int(sol.W.shape[1]),
        }
        res.solutions[name] = sol
        res.reports[name] = BeampatternReport.from_covariance(
            cfg.experiment, name, sol.covariance, spec.geom, spec.grid,
            spec.desired_level, spec.passband, spec.transition,
            null_directions=d.null_directions, X=X, info=info,
        )
    if cfg.sdr.enabled:
        spec = specs[0][1]
        t0 = time.perf_counter()
        sdr = solve_sdr_baseline(spec, opts, keep_nulls=cfg.sdr.keep_nulls, power=cfg.sdr.power)
        res.timings["sdr"] = time.perf_counter() - t0
        if sdr.status != "optimal":
            raise SolverFailure(f"{cfg.experiment}/sdr", sdr.status, sdr.message)
        info = {
            "status": sdr.status,
            "t": sdr.t,
            "iterations": sdr.iterations,
            "duality_gap": sdr.duality_gap,
            "power": cfg.sdr.power,
            "keep_nulls": cfg.sdr.keep_nulls,
        }
        res.solutions["sdr"] = sdr
        res.reports["sdr"] = BeampatternReport.from_covariance(
            cfg.experiment, "sdr", sdr.X, spec.geom, spec.grid, spec.desired_level,
            spec.passband, spec.transition, null_directions=d.null_directions, info=info,
        )
    res.summary = {name: r.metrics.to_dict() for name, r in res.reports.items()}
    if "sdr" in res.reports:
        sdr_m = res.reports["sdr"].metrics
        res.summary["sdr_condition_number"] = res.reports["sdr"].eigen["condition_number"]
        for name, r in res.reports.items():
            if name != "sdr":
                res.summary[f"{name}_asl_gap_db"] = r.metrics.asl_db - sdr_m.asl_db
    if write:
        for r in res.reports.values():
            res.files.extend(r.write(cfg.out_dir))
        res.files.append(_write_summary(cfg.out_dir, cfg.experiment, res.summary))
    return res


def run_example1(cfg: Optional[ExperimentConfig] = None, write: bool = True) -> ExperimentResult:
    """Sixteen-null sector design against the SDR baseline (reports ``proposed``, ``sdr``)."""
    cfg = cfg or default_config("example1")
    if cfg.experiment != "example1":
        raise ConfigError(f"run_example1 needs an example1 config, got {cfg.experiment!r}")
    return run_design(cfg, write)


def run_example2(cfg: Optional[ExperimentConfig] = None, write: bool = True) -> ExperimentResult:
    """Single null with multiplicity 1 and 3 (reports ``mult1``, ``mult3``, ``sdr``)."""
    cfg = cfg or default_config("example2")
    if cfg.experiment != "example2":
        raise ConfigError(f"run_example2 needs an example2 config, got {cfg.experiment!r}")
    if len(set(cfg.design.null_directions)) != 1:
        raise ConfigError("example2 blocks a single direction")
    return run_design(cfg, write)


def run_gsc(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    geom = _geometry(cfg)
    g = cfg.gsc
    B = blocking_matrix(geom.N, list(g.directions), geom, orthonormalize=g.orthonormalize)
    dirs = list(g.directions) + list(g.probe_directions)
    rep = verify_blocking(B, dirs, geom)
    blocked = np.isin(rep.directions, g.directions)
    res = ExperimentResult("gsc")
    res.solutions["blocking"] = B
    res.summary = {
        "M": geom.N,
        "L": B.L,
        "rows": int(B.W_B.shape[0]),
        "orthonormalize": g.orthonormalize,
        "max_blocked_residual": float(np.max(rep.residuals[blocked])),
        "residuals": [
            {"direction": float(a), "residual": float(r), "blocked": bool(b)}
            for a, r, b in zip(rep.directions, rep.residuals, blocked)
        ],
    }
    if write:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows = (
            (i, j, float(v.real), float(v.imag))
            for i, row in enumerate(B.W_B)
            for j, v in enumerate(row)
        )
        res.files.append(write_rows_csv(out / "gsc_blocking_matrix.csv", ("row", "col", "re", "im"), rows))
        res.files.append(_write_summary(out, "gsc", res.summary))
    return res


def run_subspace(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Monte-Carlo comparison of root clustering and root-MUSIC."""
    geom = _geometry(cfg)
    s = cfg.subspace
    model = SnapshotModel(
        geom, s.source_dirs, s.source_powers, noise_var=s.noise_var, T=s.T, seed=s.seed
    )
    rows = monte_carlo(model, s.trials, cutoff=s.cluster_cutoff)
    # noiseless reference run of both estimators
    clean = SnapshotModel(geom, s.source_dirs, s.source_powers, noise_var=0.0, T=max(s.T, geom.N), seed=s.seed)
    lam, V = eigendecompose(sample_covariance(clean))
    split = select_noise_subspace((lam, V), model.L, cutoff=s.cluster_cutoff)
    res = ExperimentResult("subspace")
    res.summary = {
        "N": geom.N,
        "L": model.L,
        "noise_var": s.noise_var,
        "T": s.T,
        "trials": s.trials,
        "seed": s.seed,
        "cluster_cutoff": s.cluster_cutoff,
        "rmse_deg": {m: rmse(rows, m) for m in ("clustering", "root_music")},
        "noiseless": {
            "clustering": [float(a) for a in estimate_directions(split, geom).angles],
            "root_music": [float(a) for a in root_music_baseline(V[:, model.L :], geom, model.L)],
            "flags": list(split.flags),
        },
    }
    res.solutions["rows"] = rows
    if write:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        counter: dict = {}
        table = []
        for trial, method, est, err in rows:
            k = counter.get((trial, method), 0)
            counter[(trial, method)] = k + 1
            table.append((trial, method, k, est, err))
        res.files.append(
            write_rows_csv(out / "subspace_trials.csv", ("trial", "method", "source", "estimate", "error"), table)
        )
        res.files.append(_write_summary(out, "subspace", res.summary))
    return res


def run(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    runners = {
        "design": run_design,
        "example1": run_example1,
        "example2": run_example2,
        "gsc": run_gsc,
        "subspace": run_subspace,
    }
    return runners[cfg.experiment](cfg, write)
