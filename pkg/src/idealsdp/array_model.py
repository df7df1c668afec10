"""
Uniform linear array model.

Element ``n`` (zero based) of the steering vector toward ``theta`` is
``exp(j 2 pi spacing n sin(theta))`` with the spacing in carrier wavelengths,
so the steering vector is the geometric sequence of the unit-circle point
``alpha(theta) = exp(j 2 pi spacing sin(theta))``.  A weight vector ``w`` nulls
``theta`` iff ``a(theta)^H w = 0``, i.e. iff the polynomial with coefficients
``w`` vanishes at ``conj(alpha(theta))``.

Angles are in degrees at every public interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbiguityError, DomainError
from .polyideal import Variety

__all__ = [
    "ArrayGeometry",
    "AngleGrid",
    "PASSBAND",
    "TRANSITION",
    "SIDELOBE",
    "make_grid",
    "label_grid",
    "steering_vector",
    "steering_matrix",
    "root_of_direction",
    "direction_of_root",
    "variety_from_directions",
    "beampattern",
    "to_db",
]

PASSBAND = "passband"
TRANSITION = "transition"
SIDELOBE = "sidelobe"

DB_FLOOR = -400.0


@dataclass(frozen=True)
class ArrayGeometry:
    N: int
    spacing: float = 0.5

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"array needs N >= 2 elements, got {self.N}")
        if not self.spacing > 0:
            raise DomainError(f"spacing must be positive, got {self.spacing}")


@dataclass(frozen=True)
class AngleGrid:
    """Strictly increasing angles (degrees) with one region label per sample."""

    angles: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=float).ravel()
        lab = np.asarray(self.labels).astype(str).ravel()
        if ang.size != lab.size:
            raise DomainError("angles and labels differ in length")
        if ang.size and np.any(np.diff(ang) <= 0):
            raise DomainError("grid angles must be strictly increasing")
        if np.any((ang < -90) | (ang > 90)):
            raise DomainError("grid angles must lie in [-90, 90]")
        bad = set(lab) - {PASSBAND, TRANSITION, SIDELOBE}
        if bad:
            raise DomainError(f"unknown region labels {sorted(bad)}")
        ang.setflags(write=False)
        lab.setflags(write=False)
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "labels", lab)

    def __len__(self):
        return self.angles.size

    def mask(self, label: str) -> np.ndarray:
        return self.labels == label

    @property
    def usable(self) -> np.ndarray:
        """Samples that enter the design objective (everything but transition)."""
        return self.labels != TRANSITION


def _label_angles(angles: np.ndarray, passband, transition: float) -> np.ndarray:
    sectors = [(float(lo), float(hi)) for lo, hi in passband]
    inside = np.zeros(angles.size, dtype=bool)
    dist = np.full(angles.size, np.inf)
    for lo, hi in sectors:
        if lo > hi:
            raise DomainError(f"passband sector ({lo}, {hi}) is reversed")
        inside |= (angles >= lo) & (angles <= hi)
        dist = np.minimum(dist, np.maximum(lo - angles, angles - hi))
    labels = np.full(angles.size, SIDELOBE, dtype=object)
    labels[inside] = PASSBAND
    # open band: a sample exactly `transition` away from an edge is sidelobe
    labels[~inside & (dist < transition)] = TRANSITION
    return labels.astype(str)


def make_grid(
    passband: Sequence[tuple[float, float]],
    transition: float = 5.0,
    step: float = 0.25,
    lo: float = -90.0,
    hi: float = 90.0,
    include: Iterable[float] = (),
) -> AngleGrid:
    """Uniform grid over ``[lo, hi]`` labelled against the passband sectors.

    Angles in ``include`` (e.g. null directions) are inserted when they are not
    already grid points, so they are sampled exactly.
    """
    if step <= 0:
        raise DomainError("grid step must be positive")
    n = int(round((hi - lo) / step))
    angles = lo + step * np.arange(n + 1)
    angles[-1] = min(angles[-1], hi)
    extra = [float(a) for a in include if np.min(np.abs(angles - a)) > 1e-9]
    if extra:
        angles = np.unique(np.concatenate([angles, extra]))
    angles = np.round(angles, 12)
    return AngleGrid(angles, _label_angles(angles, passband, transition))


def label_grid(angles, passband, transition: float = 5.0) -> AngleGrid:
    """Label an explicit set of angles against the passband sectors."""
    angles = np.asarray(angles, dtype=float)
    return AngleGrid(angles, _label_angles(angles, passband, transition))


def _check_angles(theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float)
    if np.any((th < -90) | (th > 90)) or np.any(~np.isfinite(th)):
        raise DomainError(f"angles must lie in [-90, 90] degrees: {theta}")
    return th


def root_of_direction(geom: ArrayGeometry, theta):
    """``alpha(theta) = exp(j 2 pi spacing sin theta)``."""
    th = np.deg2rad(_check_angles(theta))
    out = np.exp(2j * np.pi * geom.spacing * np.sin(th))
    return out[()] if np.ndim(out) == 0 else out


def steering_vector(geom: ArrayGeometry, theta: float) -> np.ndarray:
    if np.ndim(theta) != 0:
        raise DomainError("steering_vector takes a scalar angle; use steering_matrix")
    alpha = root_of_direction(geom, theta)
    return alpha ** np.arange(geom.N)


def steering_matrix(geom: ArrayGeometry, thetas) -> np.ndarray:
    """Steering vectors as columns, shape (N, len(thetas))."""
    alpha = np.atleast_1d(root_of_direction(geom, thetas))
    return alpha[None, :] ** np.arange(geom.N)[:, None]


def direction_of_root(geom: ArrayGeometry, z: complex, tol: float = 1e-9) -> float:
    """Inverse of :func:`root_of_direction` using only the phase of ``z``.

    Raises :class:`AmbiguityError` when more than one direction in [-90, 90]
    maps to the same phase, and :class:`DomainError` when none does.
    """
    u0 = np.angle(z) / (2 * np.pi * geom.spacing)
    # alias candidates differ in sin(theta) by integer multiples of 1/spacing
    kmax = int(np.ceil(2 * geom.spacing)) + 1
    ks = sorted(range(-kmax, kmax + 1), key=abs)
    cands = [u0 + k / geom.spacing for k in ks]
    principal = [u for u in cands if abs(u) <= 1 + tol]
    strict = [u for u in cands if abs(u) < 1 - tol]
    if not principal:
        raise DomainError(f"root {z} corresponds to no visible direction")
    if len(strict) > 1 or (len(principal) > 1 and strict):
        raise AmbiguityError(
            f"root phase {np.angle(z):.6f} rad is ambiguous for spacing {geom.spacing}"
        )
    u = float(np.clip(principal[0], -1.0, 1.0))
    return float(np.rad2deg(np.arcsin(u)))


def variety_from_directions(geom: ArrayGeometry, thetas) -> Variety:
    """Roots ``conj(alpha(theta_l))`` whose ideal nulls every ``theta_l``."""
    return Variety(np.conj(np.atleast_1d(root_of_direction(geom, thetas))))


def _check_hermitian_psd(X: np.ndarray, N: int) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (N, N):
        raise DomainError(f"X must be {N}x{N}, got {X.shape}")
    scale = max(float(np.max(np.abs(X))), 1e-300)
    if np.max(np.abs(X - X.conj().T)) > 1e-10 * scale:
        raise DomainError("X is not Hermitian")
    tr = float(np.real(np.trace(X)))
    if np.linalg.eigvalsh(X)[0] < -1e-8 * max(abs(tr), 1e-300):
        raise DomainError("X is not positive semidefinite")
    return X


def beampattern(X: np.ndarray, geom: ArrayGeometry, grid) -> np.ndarray:
    """Transmit power ``a(theta)^H X a(theta)`` at every grid angle (linear).

    ``grid`` is an :class:`AngleGrid` or a sequence of angles in degrees.
    """
    X = _check_hermitian_psd(X, geom.N)
    angles = grid.angles if isinstance(grid, AngleGrid) else np.atleast_1d(grid)
    A = steering_matrix(geom, angles)
    G = np.real(np.einsum("na,nm,ma->a", A.conj(), X, A))
    tr = float(np.real(np.trace(X)))
    small = (G < 0) & (G >= -1e-10 * max(tr, 1e-300))
    G[small] = 0.0
    return G


def to_db(power, floor: float = DB_FLOOR) -> np.ndarray:
    p = np.asarray(power, dtype=float)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(np.maximum(p, 0.0))
    return np.maximum(out, floor)
