"""
Experiment configuration.

Configs are TOML files with optional sections ``[array]``, ``[design]``,
``[solver]``, ``[sdr]``, ``[gsc]`` and ``[subspace]`` plus the top-level keys
``experiment`` and ``out_dir``.  Every section starts from the defaults of the
chosen experiment; unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError

__all__ = [
    "ArrayConfig",
    "DesignConfig",
    "SolverConfig",
    "SdrConfig",
    "GscConfig",
    "SubspaceConfig",
    "ExperimentConfig",
    "EXPERIMENTS",
    "default_config",
    "load_config",
    "config_from_dict",
    "with_overrides",
]

EXPERIMENTS = ("design", "example1", "example2", "gsc", "subspace")

EXAMPLE1_NULLS = (75.0, 60.0, 50.0, 43.0, 34.0, 33.0, 26.0, 22.0)


@dataclass(frozen=True)
class ArrayConfig:
    N: int = 20
    spacing: float = 0.5


@dataclass(frozen=True)
class DesignConfig:
    passband: tuple = ((-15.0, 15.0),)
    transition: float = 5.0
    null_directions: tuple = ()
    # one design per entry; entry m repeats every null m times
    multiplicities: tuple = (1,)
    E: float = 1.0
    gamma: Optional[float] = None
    desired_level: Optional[float] = None
    power: str = "per_antenna"
    grid_step: float = 0.25


@dataclass(frozen=True)
class SolverConfig:
    gap_tol: float = 1e-7
    feas_tol: float = 1e-7
    max_iter: int = 200
    verbose: bool = False


@dataclass(frozen=True)
class SdrConfig:
    enabled: bool = True
    power: str = "per_antenna"
    keep_nulls: bool = False


@dataclass(frozen=True)
class GscConfig:
    directions: tuple = (0.0,)
    orthonormalize: bool = False
    probe_directions: tuple = ()


@dataclass(frozen=True)
class SubspaceConfig:
    source_dirs: tuple = (-10.0, 25.0)
    source_powers: Optional[tuple] = None
    noise_var: float = 0.1
    T: int = 200
    trials: int = 100
    seed: int = 0
    # root clustering distance; None means 0.1 / N
    cluster_cutoff: Optional[float] = None


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "design"
    out_dir: str = "results"
    array: ArrayConfig = field(default_factory=ArrayConfig)
    design: DesignConfig = field(default_factory=DesignConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    sdr: SdrConfig = field(default_factory=SdrConfig)
    gsc: GscConfig = field(default_factory=GscConfig)
    subspace: SubspaceConfig = field(default_factory=SubspaceConfig)

    def __post_init__(self):
        _validate(self)


_SECTIONS = {
    "array": ArrayConfig,
    "design": DesignConfig,
    "solver": SolverConfig,
    "sdr": SdrConfig,
    "gsc": GscConfig,
    "subspace": SubspaceConfig,
}


def default_config(experiment: str) -> ExperimentConfig:
    """Built-in defaults; ``example1`` and ``example2`` reproduce the reference designs."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
    if experiment == "example1":
        nulls = EXAMPLE1_NULLS + tuple(-a for a in EXAMPLE1_NULLS)
        # per-antenna equalities are infeasible on this face; see README
        design = DesignConfig(
            passband=((-15.0, 15.0),), null_directions=nulls, power="total"
        )
        return ExperimentConfig(experiment=experiment, design=design)
    if experiment == "example2":
        design = DesignConfig(
            passband=((-90.0, -18.0), (-8.0, 90.0)),
            null_directions=(-13.0,),
            multiplicities=(1, 3),
        )
        return ExperimentConfig(experiment=experiment, design=design)
    return ExperimentConfig(experiment=experiment)


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _merge_section(base, updates: dict, name: str):
    if not isinstance(updates, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name for f in dataclasses.fields(base)}
    unknown = set(updates) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    return dataclasses.replace(base, **{k: _tuplify(v) for k, v in updates.items()})


def config_from_dict(data: dict[str, Any], experiment: Optional[str] = None) -> ExperimentConfig:
    data = dict(data)
    exp = data.pop("experiment", None) or experiment or "design"
    if experiment is not None and exp != experiment:
        raise ConfigError(f"config is for {exp!r}, but {experiment!r} was requested")
    cfg = default_config(exp)
    kwargs = {}
    if "out_dir" in data:
        kwargs["out_dir"] = str(data.pop("out_dir"))
    for key, value in data.items():
        if key not in _SECTIONS:
            raise ConfigError(f"unknown top-level key {key!r}")
        kwargs[key] = _merge_section(getattr(cfg, key), value, key)
    try:
        return dataclasses.replace(cfg, **kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, experiment: Optional[str] = None) -> ExperimentConfig:
    try:
        with open(Path(path), "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(data, experiment)


def with_overrides(
    cfg: ExperimentConfig,
    out_dir: Optional[str] = None,
    grid_step: Optional[float] = None,
    gamma: Optional[float] = None,
    seed: Optional[int] = None,
) -> ExperimentConfig:
    """Apply the command-line overrides that are not ``None``."""
    design, subspace = cfg.design, cfg.subspace
    if grid_step is not None:
        design = dataclasses.replace(design, grid_step=float(grid_step))
    if gamma is not None:
        design = dataclasses.replace(design, gamma=float(gamma))
    if seed is not None:
        subspace = dataclasses.replace(subspace, seed=int(seed))
    return dataclasses.replace(
        cfg,
        out_dir=cfg.out_dir if out_dir is None else str(out_dir),
        design=design,
        subspace=subspace,
    )


def _check_angles(values, what: str):
    for a in values:
        if not isinstance(a, (int, float)) or not -90.0 <= float(a) <= 90.0:
            raise ConfigError(f"{what}: angle {a!r} outside [-90, 90]")


def _validate(cfg: ExperimentConfig):
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    d = cfg.design
    for sector in d.passband:
        if len(sector) != 2:
            raise ConfigError(f"passband sectors are [lo, hi] pairs, got {sector!r}")
        _check_angles(sector, "design.passband")
    _check_angles(d.null_directions, "design.null_directions")
    _check_angles(cfg.gsc.directions, "gsc.directions")
    _check_angles(cfg.gsc.probe_directions, "gsc.probe_directions")
    _check_angles(cfg.subspace.source_dirs, "subspace.source_dirs")
    if not d.multiplicities or any(int(m) != m or m < 1 for m in d.multiplicities):
        raise ConfigError("design.multiplicities must be positive integers")
    if d.grid_step <= 0:
        raise ConfigError("design.grid_step must be positive")
    if cfg.solver.max_iter < 1:
        raise ConfigError("solver.max_iter must be >= 1")
    if cfg.subspace.trials < 1 or cfg.subspace.T < 1:
        raise ConfigError("subspace.trials and subspace.T must be >= 1")
