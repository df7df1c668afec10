"""
Beampattern metrics and report files.

All levels are relative to the passband peak.  A report stores the pattern in
dB (the CSV column) and every metric is computed from that stored column, so a
report reloaded from disk reproduces its metrics exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .array_model import (
    PASSBAND,
    SIDELOBE,
    AngleGrid,
    ArrayGeometry,
    beampattern,
    label_grid,
    to_db,
)
from .errors import MetricUndefinedError

__all__ = [
    "Metrics",
    "BeampatternReport",
    "compute_metrics",
    "eigen_summary",
    "write_rows_csv",
]

NOTCH_HALFWIDTH = 1.0


@dataclass(frozen=True)
class Metrics:
    peak: float
    asl_db: float
    psl_db: float
    mse: float
    ripple_db: float
    null_depths_db: tuple = ()  # (angle, level at the null sample)
    notch_depths_db: tuple = ()  # (angle, mean level within +-1 degree)

    def to_dict(self) -> dict:
        return {
            "peak": self.peak,
            "asl_db": self.asl_db,
            "psl_db": self.psl_db,
            "mse": self.mse,
            "ripple_db": self.ripple_db,
            "null_depths_db": [list(p) for p in self.null_depths_db],
            "notch_depths_db": [list(p) for p in self.notch_depths_db],
        }

    @property
    def worst_null_db(self) -> float:
        return max((d for _, d in self.null_depths_db), default=np.nan)


def _db(x: float) -> float:
    return float(to_db(x))


def compute_metrics(
    pattern,
    grid: AngleGrid,
    G_d,
    null_directions: Sequence[float] = (),
    notch_halfwidth: float = NOTCH_HALFWIDTH,
) -> Metrics:
    """Metrics of a linear power pattern sampled on ``grid``.

    ASL and PSL are the mean and the maximum sidelobe power over the passband
    peak.  MSE is the mean of ``(G_d - G)^2`` over non-transition samples, in
    linear units.  Null depth is the level at the grid sample nearest each null
    direction; notch depth is the mean power within ``notch_halfwidth`` degrees.
    """
    G = np.asarray(pattern, dtype=float)
    G_d = np.asarray(G_d, dtype=float)
    side = grid.mask(SIDELOBE)
    band = grid.mask(PASSBAND)
    if not side.any():
        raise MetricUndefinedError("grid has no sidelobe samples")
    if not band.any():
        raise MetricUndefinedError("grid has no passband samples")
    peak = float(np.max(G[band]))
    if not peak > 0:
        raise MetricUndefinedError("passband peak is zero")
    usable = grid.usable
    mse = float(np.mean((G_d[usable] - G[usable]) ** 2))
    band_db = to_db(G[band] / peak)
    nulls, notches = [], []
    for th in null_directions:
        i = int(np.argmin(np.abs(grid.angles - th)))
        nulls.append((float(th), _db(G[i] / peak)))
        near = np.abs(grid.angles - th) <= notch_halfwidth
        notches.append((float(th), _db(np.mean(G[near]) / peak)))
    return Metrics(
        peak=peak,
        asl_db=_db(np.mean(G[side]) / peak),
        psl_db=_db(np.max(G[side]) / peak),
        mse=mse,
        ripple_db=float(np.max(band_db) - np.min(band_db)),
        null_depths_db=tuple(nulls),
        notch_depths_db=tuple(notches),
    )


def eigen_summary(X: np.ndarray, rel_tol: float = 1e-10) -> dict:
    ev = np.linalg.eigvalsh(0.5 * (X + X.conj().T))[::-1]
    rank = int(np.sum(ev > rel_tol * ev[0])) if ev[0] > 0 else 0
    return {
        "eigenvalues": [float(v) for v in ev],
        "rank": rank,
        "condition_number": float(ev[0] / ev[-1]) if ev[-1] > 0 else float("inf"),
    }


@dataclass
class BeampatternReport:
    experiment: str
    method: str
    grid: AngleGrid
    pattern_db: np.ndarray
    desired_level: float
    passband: tuple
    transition: float
    null_directions: tuple = ()
    per_antenna_powers: Optional[np.ndarray] = None
    eigen: Optional[dict] = None
    info: dict = field(default_factory=dict)
    metrics: Metrics = field(init=False)

    def __post_init__(self):
        self.pattern_db = np.asarray(self.pattern_db, dtype=float)
        self.null_directions = tuple(float(a) for a in self.null_directions)
        self.metrics = compute_metrics(
            self.pattern_linear, self.grid, self.G_d, self.null_directions
        )

    @property
    def pattern_linear(self) -> np.ndarray:
        return 10.0 ** (self.pattern_db / 10.0)

    @property
    def G_d(self) -> np.ndarray:
        return np.where(self.grid.mask(PASSBAND), self.desired_level, 0.0)

    @classmethod
    def from_covariance(
        cls,
        experiment: str,
        method: str,
        R: np.ndarray,
        geom: ArrayGeometry,
        grid: AngleGrid,
        desired_level: float,
        passband,
        transition: float,
        null_directions=(),
        X: Optional[np.ndarray] = None,
        info: Optional[dict] = None,
    ) -> "BeampatternReport":
        """Report for the transmit covariance ``R = W W^H`` (N x N).

        ``X`` is the matrix whose spectrum is summarized (defaults to ``R``).
        """
        pattern = beampattern(R, geom, grid)
        return cls(
            experiment=experiment,
            method=method,
            grid=grid,
            pattern_db=to_db(pattern),
            desired_level=float(desired_level),
            passband=tuple(tuple(map(float, s)) for s in passband),
            transition=float(transition),
            null_directions=tuple(null_directions),
            per_antenna_powers=np.real(np.diag(R)).copy(),
            eigen=eigen_summary(R if X is None else X),
            info=dict(info or {}),
        )

    # -- files -------------------------------------------------------------

    def stem(self) -> str:
        return f"{self.experiment}_{self.method}"

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "method": self.method,
            "desired_level": self.desired_level,
            "passband": [list(s) for s in self.passband],
            "transition": self.transition,
            "null_directions": list(self.null_directions),
            "metrics": self.metrics.to_dict(),
            "per_antenna_powers": None
            if self.per_antenna_powers is None
            else [float(p) for p in self.per_antenna_powers],
            "eigen": self.eigen,
            "info": self.info,
        }

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{self.stem()}_pattern.csv"
        json_path = out / f"{self.stem()}_metrics.json"
        write_rows_csv(
            csv_path,
            ("angle_deg", "value_db"),
            zip(self.grid.angles.tolist(), self.pattern_db.tolist()),
        )
        with open(json_path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return csv_path, json_path

    @classmethod
    def load(cls, csv_path, json_path) -> "BeampatternReport":
        with open(json_path) as fh:
            meta = json.load(fh)
        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        if rows[0] != ["angle_deg", "value_db"]:
            raise ValueError(f"unexpected CSV header {rows[0]}")
        data = np.array([[float(a), float(v)] for a, v in rows[1:]])
        grid = label_grid(data[:, 0], meta["passband"], meta["transition"])
        powers = meta.get("per_antenna_powers")
        return cls(
            experiment=meta["experiment"],
            method=meta["method"],
            grid=grid,
            pattern_db=data[:, 1],
            desired_level=meta["desired_level"],
            passband=tuple(tuple(s) for s in meta["passband"]),
            transition=meta["transition"],
            null_directions=tuple(meta["null_directions"]),
            per_antenna_powers=None if powers is None else np.array(powers),
            eigen=meta.get("eigen"),
            info=meta.get("info", {}),
        )


def write_rows_csv(path, header: Sequence[str], rows) -> Path:
    """CSV with ``repr`` precision, so floats read back exactly."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path
