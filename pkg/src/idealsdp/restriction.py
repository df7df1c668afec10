"""
Restricted beampattern-matching SDP and the semidefinite-relaxation baseline.

The transmit covariance ``WW^H`` with nulls on a variety is written as
``Q X Q^H`` with ``Q`` the ideal basis, so the null constraints hold for every
``X`` and rank ``K`` is enforced by the floor ``X >= gamma I``.  The design is
the minimax fit::

    minimize t   s.t.  |G_d(theta_i) - tr(X D(theta_i))| <= t   (non-transition angles)
                       tr(X H_j) = E / N                        (per-antenna power)
                       X - gamma I >= 0

with ``D(theta) = Q^H a a^H Q`` and ``H_j = Q^H e_j e_j^T Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import subspace_angles

from .array_model import (
    AngleGrid,
    ArrayGeometry,
    beampattern,
    direction_of_root,
    make_grid,
    steering_matrix,
)
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    FactorizationError,
    PreconditionError,
)
from .polyideal import IdealBasis, Variety, ideal_basis
from .sdp_solver import HermitianSdp, SdpSolution, SolverOptions, solve

__all__ = [
    "DesignSpec",
    "RestrictedProblem",
    "build_restricted",
    "to_sdp",
    "recover_W",
    "solve_restricted",
    "solve_sdr_baseline",
    "face_convexity_check",
    "ConvexityReport",
    "condition_number",
]

POWER_MODES = ("per_antenna", "total")
UNIT_CIRCLE_TOL = 1e-9


def _variety_directions(geom: ArrayGeometry, variety: Variety) -> np.ndarray:
    """Directions nulled by ``variety`` (roots are conj(alpha(theta)))."""
    return np.array([direction_of_root(geom, np.conj(r)) for r in variety.roots])


@dataclass(frozen=True)
class DesignSpec:
    """Beampattern design problem.

    ``gamma``, ``grid`` and ``desired_level`` may be left as ``None`` and are
    then filled in: ``gamma = 1e-6 * E / tr(Q^H Q)``, a 0.25 degree grid over
    [-90, 90] with the null directions inserted, and ``desired_level = E``.
    ``power`` selects per-antenna equalities (``tr(X H_j) = E/N``) or a single
    total-power equality (``tr(X Q^H Q) = E``).
    """

    geom: ArrayGeometry
    passband: tuple
    variety: Variety
    K: int
    transition: float = 5.0
    E: float = 1.0
    gamma: Optional[float] = None
    grid: Optional[AngleGrid] = None
    desired_level: Optional[float] = None
    power: str = "per_antenna"

    def __post_init__(self):
        sectors = tuple((float(lo), float(hi)) for lo, hi in self.passband)
        object.__setattr__(self, "passband", sectors)
        N, L = self.geom.N, len(self.variety)
        if self.K != N - L:
            raise DimensionError(f"K={self.K} but N - |variety| = {N - L}")
        if self.power not in POWER_MODES:
            raise ConfigError(f"power must be one of {POWER_MODES}, got {self.power!r}")
        if not self.E > 0:
            raise DomainError("power budget E must be positive")
        if self.gamma is None:
            g = ideal_basis(self.variety, N).generator.coeffs
            trQQ = self.K * float(np.sum(np.abs(g) ** 2))
            object.__setattr__(self, "gamma", 1e-6 * self.E / trQQ)
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")
        if self.desired_level is None:
            object.__setattr__(self, "desired_level", float(self.E))
        if self.variety.on_unit_circle(UNIT_CIRCLE_TOL):
            dirs = _variety_directions(self.geom, self.variety)
            for lo, hi in sectors:
                inside = dirs[(dirs >= lo) & (dirs <= hi)]
                if inside.size:
                    raise DomainError(f"null directions {inside} fall inside the passband")
        else:
            dirs = ()
        if self.grid is None:
            object.__setattr__(
                self, "grid", make_grid(sectors, self.transition, include=dirs)
            )

    @property
    def null_directions(self) -> np.ndarray:
        return _variety_directions(self.geom, self.variety)


@dataclass(frozen=True)
class RestrictedProblem:
    basis: IdealBasis
    B: np.ndarray  # rows a(theta_i)^H Q, shape (n_grid, K)
    G_d: np.ndarray
    gamma: float
    spec: DesignSpec = field(repr=False)

    @property
    def Q(self) -> np.ndarray:
        return self.basis.Q

    @property
    def D_list(self) -> np.ndarray:
        """``D(theta_i) = Q^H a a^H Q`` stacked, shape (n_grid, K, K)."""
        return np.einsum("ik,il->ikl", self.B.conj(), self.B)

    @property
    def H_list(self) -> np.ndarray:
        """``H_j = Q^H B_j Q`` stacked, shape (N, K, K)."""
        Q = self.Q
        return np.einsum("jk,jl->jkl", Q.conj(), Q)


def build_restricted(spec: DesignSpec) -> RestrictedProblem:
    if not spec.variety.on_unit_circle(UNIT_CIRCLE_TOL):
        raise DomainError("variety roots must lie on the unit circle")
    basis = ideal_basis(spec.variety, spec.geom.N)
    if basis.K != spec.K:
        raise DimensionError(f"ideal basis has {basis.K} columns, spec asks for {spec.K}")
    A = steering_matrix(spec.geom, spec.grid.angles)
    B = A.T.conj() @ basis.Q
    G_d = np.where(spec.grid.mask("passband"), spec.desired_level, 0.0)
    return RestrictedProblem(basis=basis, B=B, G_d=G_d, gamma=float(spec.gamma), spec=spec)


def _minimax_sdp(B, G_d, usable, H, power_rhs, floor, extra_eq=None) -> HermitianSdp:
    """Epigraph SDP over rows ``B`` (pattern ``tr(X b b^H)`` per angle)."""
    Bu = B[usable]
    D = np.einsum("ik,il->ikl", Bu.conj(), Bu)
    n = B.shape[1]
    m = D.shape[0]
    eq_A, eq_b = H, power_rhs
    if extra_eq is not None:
        eq_A = np.concatenate([eq_A, extra_eq[0]])
        eq_b = np.concatenate([eq_b, extra_eq[1]])
    return HermitianSdp(
        dim=n,
        objective=np.zeros((n, n)),
        c_t=1.0,
        has_epigraph=True,
        eq_matrices=eq_A,
        eq_rhs=eq_b,
        ineq_matrices=np.concatenate([D, -D]),
        ineq_t=-np.ones(2 * m),
        ineq_rhs=np.concatenate([G_d[usable], -G_d[usable]]),
        floor=floor,
    )


def _power_rows(Q: np.ndarray, E: float, mode: str):
    N = Q.shape[0]
    if mode == "per_antenna":
        H = np.einsum("jk,jl->jkl", Q.conj(), Q)
        return H, np.full(N, E / N)
    if mode == "total":
        return (Q.conj().T @ Q)[None], np.array([E])
    raise ConfigError(f"unknown power mode {mode!r}")


def to_sdp(rp: RestrictedProblem, power: Optional[str] = None) -> HermitianSdp:
    spec = rp.spec
    H, rhs = _power_rows(rp.Q, spec.E, power or spec.power)
    return _minimax_sdp(rp.B, rp.G_d, spec.grid.usable, H, rhs, rp.gamma)


def recover_W(X_opt: np.ndarray, Q) -> np.ndarray:
    """``W = Q R`` with ``X_opt = R R^H`` (lower Cholesky factor)."""
    Qm = Q.Q if isinstance(Q, IdealBasis) else np.asarray(Q)
    X = np.asarray(X_opt, dtype=complex)
    if X.shape != (Qm.shape[1],) * 2:
        raise DimensionError(f"X must be {Qm.shape[1]}x{Qm.shape[1]}, got {X.shape}")
    try:
        R = np.linalg.cholesky(0.5 * (X + X.conj().T))
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("X is not positive definite; the floor was violated") from exc
    return Qm @ R


def condition_number(X: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(0.5 * (X + X.conj().T))
    return float(ev[-1] / ev[0]) if ev[0] > 0 else np.inf


@dataclass
class RestrictedSolution:
    sdp: SdpSolution
    problem: RestrictedProblem
    W: Optional[np.ndarray]

    @property
    def covariance(self) -> Optional[np.ndarray]:
        return None if self.W is None else self.W @ self.W.conj().T


def solve_restricted(
    spec: DesignSpec, opts: Optional[SolverOptions] = None
) -> RestrictedSolution:
    """Build, solve and factor the restricted problem in one call."""
    rp = build_restricted(spec)
    sol = solve(to_sdp(rp), opts)
    W = recover_W(sol.X, rp.basis) if sol.status != "infeasible" else None
    return RestrictedSolution(sdp=sol, problem=rp, W=W)


def solve_sdr_baseline(
    spec: DesignSpec,
    opts: Optional[SolverOptions] = None,
    keep_nulls: bool = False,
    power: str = "per_antenna",
) -> SdpSolution:
    """Full N x N relaxation with the rank constraint dropped and no floor.

    With ``keep_nulls`` the null directions enter as ``a^H X a = 0`` rows.
    Those rows confine X to the same face as the restricted problem and leave
    no strictly feasible point, so they are off by default.
    """
    N = spec.geom.N
    I = np.eye(N)
    A = steering_matrix(spec.geom, spec.grid.angles)
    G_d = np.where(spec.grid.mask("passband"), spec.desired_level, 0.0)
    H, rhs = _power_rows(I, spec.E, power)
    extra = None
    if keep_nulls:
        An = steering_matrix(spec.geom, spec.null_directions)
        extra = (np.einsum("nl,ml->lnm", An, An.conj()), np.zeros(An.shape[1]))
    prob = _minimax_sdp(A.T.conj(), G_d, spec.grid.usable, H, rhs, 0.0, extra)
    return solve(prob, opts)


@dataclass(frozen=True)
class ConvexityReport:
    rank: int
    max_principal_angle: float
    in_face: bool


def face_convexity_check(
    W1: np.ndarray, W2: np.ndarray, lam: float, tol: float = 1e-8
) -> ConvexityReport:
    """Check that ``lam W1 W1^H + (1 - lam) W2 W2^H`` stays on the shared face."""
    W1, W2 = np.asarray(W1, complex), np.asarray(W2, complex)
    if W1.shape != W2.shape:
        raise PreconditionError("W1 and W2 must have the same shape")
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError("lambda must lie in [0, 1]")
    K = W1.shape[1]
    if np.max(subspace_angles(W1, W2)) > tol:
        raise PreconditionError("W1 and W2 do not span the same subspace")
    X = lam * W1 @ W1.conj().T + (1 - lam) * W2 @ W2.conj().T
    U, s, _ = np.linalg.svd(X)
    rank = int(np.sum(s > s[0] * 1e-10)) if s[0] > 0 else 0
    ang = float(np.max(subspace_angles(U[:, :rank], W1))) if rank else np.pi / 2
    return ConvexityReport(rank=rank, max_principal_angle=ang, in_face=rank == K and ang <= tol)


def restricted_pattern(sol: RestrictedSolution) -> np.ndarray:
    spec = sol.problem.spec
    return beampattern(sol.covariance, spec.geom, spec.grid)
