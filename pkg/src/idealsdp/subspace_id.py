"""
Subspace direction finding from the polynomial-ideal point of view.

For ``L`` uncorrelated sources the noise eigenvectors of the covariance, read
as polynomials, all vanish at ``conj(alpha(theta_l))``: each one factors as
``g * h_i`` with ``g`` the generator of the source variety.  Instead of
picking the noise subspace by eigenvalue and the roots by distance to the unit
circle (root-MUSIC), :func:`select_noise_subspace` picks the eigenvectors
whose root sets share ``L`` tight clusters and reads the directions off the
cluster centroids.

Clustering rule: all roots of all eigenvector polynomials are clustered in the
complex plane (complete linkage, cutoff ``0.1 / N``).  Clusters are ranked by
the number of distinct eigenvectors contributing to them, then by smaller
dispersion (mean distance to the centroid).  The top ``L`` clusters hold the
signal roots; eigenvectors with a root in every one of them form the noise
set, trimmed or topped up by eigenvalue to exactly ``N - L`` members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .array_model import ArrayGeometry, direction_of_root, steering_matrix
from .errors import DimensionError, DomainError, PreconditionError

__all__ = [
    "SnapshotModel",
    "EigenSplit",
    "RootCluster",
    "DirectionEstimate",
    "simulate_snapshots",
    "sample_covariance",
    "eigendecompose",
    "eigenvector_roots",
    "select_noise_subspace",
    "estimate_directions",
    "root_music_baseline",
    "monte_carlo",
    "rmse",
]

COEFF_TRIM = 1e-12


@dataclass(frozen=True)
class SnapshotModel:
    geom: ArrayGeometry
    source_dirs: tuple
    source_powers: tuple = None
    noise_var: float = 0.0
    T: int = 100
    seed: int = 0

    def __post_init__(self):
        dirs = tuple(float(d) for d in np.atleast_1d(self.source_dirs))
        powers = (
            (1.0,) * len(dirs)
            if self.source_powers is None
            else tuple(float(p) for p in np.atleast_1d(self.source_powers))
        )
        if len(powers) != len(dirs):
            raise DimensionError("one power per source is required")
        if len(dirs) >= self.geom.N:
            raise DimensionError(f"need L < N sources, got L={len(dirs)}, N={self.geom.N}")
        if any(p < 0 for p in powers):
            raise DomainError("source powers must be nonnegative")
        if self.noise_var < 0:
            raise DomainError("noise variance must be nonnegative")
        if int(self.T) != self.T or self.T < 1:
            raise DomainError("T must be a positive integer")
        object.__setattr__(self, "source_dirs", dirs)
        object.__setattr__(self, "source_powers", powers)

    @property
    def L(self) -> int:
        return len(self.source_dirs)


def _cgauss(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-power circular complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def simulate_snapshots(model: SnapshotModel, rng: Optional[np.random.Generator] = None):
    """Snapshot matrix ``A s + n`` of shape (N, T)."""
    rng = rng if rng is not None else np.random.default_rng(model.seed)
    N, T = model.geom.N, int(model.T)
    X = np.zeros((N, T), dtype=complex)
    if model.L:
        A = steering_matrix(model.geom, model.source_dirs)
        S = np.sqrt(np.asarray(model.source_powers))[:, None] * _cgauss(rng, (model.L, T))
        X += A @ S
    if model.noise_var > 0:
        X += np.sqrt(model.noise_var) * _cgauss(rng, (N, T))
    return X


def sample_covariance(model: SnapshotModel, rng: Optional[np.random.Generator] = None):
    X = simulate_snapshots(model, rng)
    R = X @ X.conj().T / X.shape[1]
    return 0.5 * (R + R.conj().T)


def eigendecompose(R: np.ndarray):
    """Eigenvalues in descending order with matching orthonormal eigenvectors."""
    w, V = np.linalg.eigh(R)
    return w[::-1].copy(), V[:, ::-1].copy()


def eigenvector_roots(v: np.ndarray) -> np.ndarray:
    """Roots of ``sum_n v[n] x^n`` via companion-matrix eigenvalues.

    Leading coefficients below ``1e-12 * max|v|`` are dropped, lowering the
    degree accordingly.
    """
    v = np.asarray(v, dtype=complex).ravel()
    scale = np.max(np.abs(v), initial=0.0)
    if scale == 0:
        raise DomainError("the zero vector has no roots")
    keep = np.flatnonzero(np.abs(v) > COEFF_TRIM * scale)
    c = v[: keep[-1] + 1]
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1]).astype(complex)


@dataclass(frozen=True)
class RootCluster:
    centroid: complex
    dispersion: float
    owners: frozenset
    size: int


@dataclass
class EigenSplit:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    selected_noise_indices: tuple
    criterion_scores: np.ndarray
    clusters: tuple = ()
    flags: list = field(default_factory=list)

    def __post_init__(self):
        N = self.eigenvectors.shape[0]
        V = self.eigenvectors
        if np.max(np.abs(V.conj().T @ V - np.eye(V.shape[1]))) > 1e-10:
            raise DomainError("eigenvectors are not orthonormal")
        if len(set(self.selected_noise_indices)) != len(self.selected_noise_indices):
            raise DomainError("duplicate noise indices")
        if not 0 < len(self.selected_noise_indices) < N:
            raise DomainError("noise set must be a proper nonempty subset")

    @property
    def L(self) -> int:
        return self.eigenvectors.shape[0] - len(self.selected_noise_indices)

    @property
    def noise_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, list(self.selected_noise_indices)]


def _cluster_roots(points: np.ndarray, owners: np.ndarray, cutoff: float):
    if points.size == 1:
        labels = np.ones(1, dtype=int)
    else:
        Z = linkage(np.column_stack([points.real, points.imag]), method="complete")
        labels = fcluster(Z, t=cutoff, criterion="distance")
    out = []
    for lab in np.unique(labels):
        idx = labels == lab
        pts = points[idx]
        c = pts.mean()
        out.append(
            RootCluster(
                centroid=complex(c),
                dispersion=float(np.mean(np.abs(pts - c))),
                owners=frozenset(int(o) for o in owners[idx]),
                size=int(idx.sum()),
            )
        )
    # most distinct owners first, then tightest
    out.sort(key=lambda cl: (-len(cl.owners), cl.dispersion, cl.centroid.real, cl.centroid.imag))
    return out


def select_noise_subspace(
    eigs, L: int, cutoff: Optional[float] = None, degenerate_tol: float = 1e-10
) -> EigenSplit:
    """Choose the ``N - L`` eigenvectors that best share ``L`` root clusters.

    ``eigs`` is ``(eigenvalues, eigenvectors)`` in descending order, as from
    :func:`eigendecompose`.
    """
    lam, V = eigs
    lam = np.asarray(lam, dtype=float)
    V = np.asarray(V, dtype=complex)
    N = V.shape[0]
    if not 1 <= L < N:
        raise PreconditionError(f"need 1 <= L < N, got L={L}, N={N}")
    cutoff = 0.1 / N if cutoff is None else cutoff
    roots, owners = [], []
    for i in range(V.shape[1]):
        r = eigenvector_roots(V[:, i])
        roots.append(r)
        owners.append(np.full(r.size, i))
    points = np.concatenate(roots)
    owner = np.concatenate(owners)
    clusters = _cluster_roots(points, owner, cutoff)
    flags = []
    if len(clusters) < L:
        flags.append("fewer root clusters than sources")
    top = tuple(clusters[:L])

    # per-eigenvector score: sum over signal clusters of exp(-distance / cutoff)
    scores = np.zeros(V.shape[1])
    for i, r in enumerate(roots):
        for cl in top:
            if r.size:
                scores[i] += np.exp(-np.min(np.abs(r - cl.centroid)) / cutoff)

    common = set(range(V.shape[1]))
    for cl in top:
        common &= cl.owners
    order = np.argsort(lam, kind="stable")  # ascending eigenvalue
    target = N - L
    if len(common) > target:
        flags.append("more eigenvectors share the clusters than N - L; kept smallest eigenvalues")
        chosen = [int(i) for i in order if i in common][:target]
    else:
        chosen = [int(i) for i in order if i in common]
        if len(chosen) < target:
            flags.append("noise set topped up by smallest eigenvalue")
            chosen += [int(i) for i in order if i not in common][: target - len(chosen)]
    chosen = sorted(chosen)

    # ties across the boundary make the split ambiguous
    sel = np.zeros(V.shape[1], dtype=bool)
    sel[chosen] = True
    if sel.any() and (~sel).any():
        gap = np.min(np.abs(lam[sel][:, None] - lam[~sel][None, :]))
        if gap <= degenerate_tol * max(np.max(np.abs(lam)), 1e-300):
            flags.append("degenerate eigenvalues straddle the noise/signal split")
    return EigenSplit(
        eigenvalues=lam,
        eigenvectors=V,
        selected_noise_indices=tuple(chosen),
        criterion_scores=scores,
        clusters=top,
        flags=flags,
    )


@dataclass(frozen=True)
class DirectionEstimate:
    angles: np.ndarray
    dispersion: np.ndarray
    centroids: np.ndarray


def estimate_directions(split: EigenSplit, geom: ArrayGeometry) -> DirectionEstimate:
    """Directions from the signal cluster centroids, sorted by angle.

    The centroids approximate ``conj(alpha(theta_l))``; aliasing raises
    :class:`~idealsdp.errors.AmbiguityError`.
    """
    if not split.clusters:
        raise PreconditionError("split carries no signal clusters")
    cents = np.array([cl.centroid for cl in split.clusters])
    disp = np.array([cl.dispersion for cl in split.clusters])
    ang = np.array([direction_of_root(geom, np.conj(c)) for c in cents])
    order = np.argsort(ang)
    return DirectionEstimate(angles=ang[order], dispersion=disp[order], centroids=cents[order])


def root_music_polynomial(noise_vectors: np.ndarray) -> np.ndarray:
    """Ascending coefficients of ``z^(N-1) a(z)^H Q_n Q_n^H a(z)``."""
    Qn = np.atleast_2d(noise_vectors)
    C = Qn @ Qn.conj().T
    N = C.shape[0]
    return np.array([np.trace(C, offset=k) for k in range(-(N - 1), N)])


def root_music_baseline(
    noise_vectors: np.ndarray, geom: ArrayGeometry, L: int, merge_tol: float = 1e-4
) -> np.ndarray:
    """Classical root-MUSIC: the ``L`` roots inside the unit circle closest to it.

    Noiseless double roots on the circle split numerically into nearby pairs;
    roots within ``merge_tol`` of one already taken are skipped.
    """
    coeffs = root_music_polynomial(noise_vectors)
    r = np.roots(coeffs[::-1])
    cand = r[np.abs(r) <= 1 + 1e-6]
    cand = cand[np.argsort(np.abs(1 - np.abs(cand)))]
    picked = []
    for z in cand:
        if all(abs(z - p) > merge_tol for p in picked):
            picked.append(z)
        if len(picked) == L:
            break
    if len(picked) < L:
        raise DomainError(f"only {len(picked)} admissible roots for L={L}")
    return np.sort([direction_of_root(geom, z) for z in picked])


def monte_carlo(
    model: SnapshotModel,
    trials: int,
    seed: Optional[int] = None,
    cutoff: Optional[float] = None,
) -> list:
    """Per-trial estimates for both estimators.

    Returns rows ``(trial, method, estimate, error)`` with one row per source.
    Trials use independent child seeds of ``seed`` (default: ``model.seed``).
    """
    ss = np.random.SeedSequence(model.seed if seed is None else seed)
    truth = np.sort(model.source_dirs)
    rows = []
    for k, child in enumerate(ss.spawn(trials)):
        R = sample_covariance(model, np.random.default_rng(child))
        lam, V = eigendecompose(R)
        L = model.L
        est = {}
        try:
            split = select_noise_subspace((lam, V), L, cutoff=cutoff)
            est["clustering"] = estimate_directions(split, model.geom).angles
        except DomainError:
            est["clustering"] = np.full(L, np.nan)
        try:
            est["root_music"] = root_music_baseline(V[:, L:], model.geom, L)
        except DomainError:
            est["root_music"] = np.full(L, np.nan)
        for method, ang in est.items():
            for a, t in zip(ang, truth):
                rows.append((k, method, float(a), float(a - t)))
    return rows


def rmse(rows: Sequence[tuple], method: str) -> float:
    err = np.array([r[3] for r in rows if r[1] == method], dtype=float)
    return float(np.sqrt(np.nanmean(err**2))) if err.size else np.nan
