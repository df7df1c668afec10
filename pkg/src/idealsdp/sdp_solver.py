"""
Dense interior-point solver for small Hermitian semidefinite programs.

Problem form (``X`` Hermitian n x n, optional scalar ``t``)::

    minimize    Re tr(C X) + c_t t
    subject to  Re tr(A_i X)            = b_i
                Re tr(F_k X) + g_k t   <= h_k
                X - floor * I          >= 0   (PSD)

The Hermitian variable is handled through its real symmetric embedding
``[[Re X, -Im X], [Im X, Re X]]``.  Equalities are eliminated up front by an
SVD (redundant rows are allowed; inconsistent ones make the problem
infeasible), leaving an inequality-form conic program in the reduced
coordinates ``u``::

    minimize c'u   subject to   G u + s = h,   s in R^m_+ x S^{2n}_+

which is solved in two phases.  Phase 1 maximizes a uniform margin ``-tau``
with ``h - G u + tau e`` in the cone, giving a strictly feasible start (or an
infeasibility verdict).  Phase 2 is a primal-dual path-following method with
Nesterov-Todd scaling and a Mehrotra predictor-corrector.  At every iterate
the dual point is projected onto ``G'z + c = 0``; when the projection stays
inside the cone its objective is a certified lower bound, which is what
``duality_gap`` and the history report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, DomainError

__all__ = [
    "SolverOptions",
    "HermitianSdp",
    "SdpSolution",
    "real_embedding",
    "hermitian_from_embedding",
    "hvec",
    "hmat",
    "solve",
]

OPTIMAL = "optimal"
MAX_ITER = "max_iter"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverOptions:
    gap_tol: float = 1e-7
    feas_tol: float = 1e-7
    max_iter: int = 200
    step_fraction: float = 0.99
    verbose: bool = False
    # iteration budget of the feasibility phase; None means max_iter
    phase1_max_iter: Optional[int] = None


def real_embedding(H: np.ndarray) -> np.ndarray:
    """Symmetric 2n x 2n embedding ``[[Re H, -Im H], [Im H, Re H]]``."""
    H = np.asarray(H, dtype=complex)
    re, im = H.real, H.imag
    return np.block([[re, -im], [im, re]])


def hermitian_from_embedding(M: np.ndarray) -> np.ndarray:
    """Least-squares inverse of :func:`real_embedding`."""
    n = M.shape[0] // 2
    re = 0.5 * (M[:n, :n] + M[n:, n:])
    im = 0.5 * (M[n:, :n] - M[:n, n:])
    return re + 1j * im


def _hindex(n: int):
    iu, ju = np.triu_indices(n, k=1)
    return np.arange(n), iu, ju


def hvec(X: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian ``X`` (stacked on leading axes).

    The basis is orthonormal for ``<A, B> = Re tr(A B)``, so
    ``hvec(A) @ hvec(B) == Re tr(A B)`` for Hermitian A and B.
    """
    X = np.asarray(X, dtype=complex)
    n = X.shape[-1]
    d, iu, ju = _hindex(n)
    r2 = np.sqrt(2.0)
    return np.concatenate(
        [X[..., d, d].real, r2 * X[..., iu, ju].real, r2 * X[..., iu, ju].imag],
        axis=-1,
    )


def hmat(v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    d, iu, ju = _hindex(n)
    m = iu.size
    X = np.zeros(v.shape[:-1] + (n, n), dtype=complex)
    X[..., d, d] = v[..., :n]
    upper = (v[..., n : n + m] + 1j * v[..., n + m :]) / np.sqrt(2.0)
    X[..., iu, ju] = upper
    X[..., ju, iu] = upper.conj()
    return X


def _stack(mats, n: int) -> np.ndarray:
    if mats is None:
        return np.zeros((0, n, n), dtype=complex)
    a = np.asarray(mats, dtype=complex)
    if a.size == 0:
        return np.zeros((0, n, n), dtype=complex)
    if a.ndim == 2:
        a = a[None]
    if a.shape[1:] != (n, n):
        raise DimensionError(f"constraint matrices must be {n}x{n}, got {a.shape[1:]}")
    return a


def _check_hermitian(a: np.ndarray, what: str):
    if a.size == 0:
        return
    scale = np.maximum(np.max(np.abs(a), axis=(-2, -1)), 1.0)
    err = np.max(np.abs(a - np.swapaxes(a.conj(), -1, -2)), axis=(-2, -1))
    if np.any(err > 1e-12 * scale):
        raise DomainError(f"{what} matrices must be Hermitian")


@dataclass
class HermitianSdp:
    """Data of a Hermitian SDP.

    Constraint matrices are stacked along the first axis: ``eq_matrices`` has
    shape (m_e, n, n) and pairs with ``eq_rhs``; ``ineq_matrices`` (m_i, n, n)
    pairs with ``ineq_t`` (coefficient of ``t``) and ``ineq_rhs``.
    """

    dim: int
    objective: np.ndarray
    c_t: float = 0.0
    has_epigraph: bool = False
    eq_matrices: Optional[np.ndarray] = None
    eq_rhs: Optional[np.ndarray] = None
    ineq_matrices: Optional[np.ndarray] = None
    ineq_t: Optional[np.ndarray] = None
    ineq_rhs: Optional[np.ndarray] = None
    floor: float = 0.0

    def __post_init__(self):
        n = int(self.dim)
        if n < 1:
            raise DimensionError("dim must be >= 1")
        self.dim = n
        C = np.asarray(self.objective, dtype=complex)
        if C.shape != (n, n):
            raise DimensionError(f"objective must be {n}x{n}")
        self.objective = C
        self.eq_matrices = _stack(self.eq_matrices, n)
        self.eq_rhs = np.asarray(
            [] if self.eq_rhs is None else self.eq_rhs, dtype=float
        ).ravel()
        self.ineq_matrices = _stack(self.ineq_matrices, n)
        m_i = self.ineq_matrices.shape[0]
        self.ineq_rhs = np.asarray(
            [] if self.ineq_rhs is None else self.ineq_rhs, dtype=float
        ).ravel()
        self.ineq_t = (
            np.zeros(m_i) if self.ineq_t is None else np.asarray(self.ineq_t, float).ravel()
        )
        if self.eq_rhs.size != self.eq_matrices.shape[0]:
            raise DimensionError("eq_rhs length does not match eq_matrices")
        if self.ineq_rhs.size != m_i or self.ineq_t.size != m_i:
            raise DimensionError("inequality data lengths disagree")
        if not self.has_epigraph and (self.c_t != 0 or np.any(self.ineq_t != 0)):
            raise DimensionError("t coefficients given but has_epigraph is False")
        if self.floor < 0:
            raise DomainError("floor must be nonnegative")
        _check_hermitian(C[None], "objective")
        _check_hermitian(self.eq_matrices, "equality")
        _check_hermitian(self.ineq_matrices, "inequality")

    @property
    def equalities(self):
        return list(zip(self.eq_matrices, self.eq_rhs))

    @property
    def inequalities(self):
        return list(zip(self.ineq_matrices, self.ineq_t, self.ineq_rhs))

    @property
    def n_vars(self) -> int:
        return self.dim**2 + int(self.has_epigraph)


@dataclass
class SdpSolution:
    X: Optional[np.ndarray]
    t: Optional[float]
    objective_value: float
    duality_gap: float
    iterations: int
    status: str
    dual_bound: float = -np.inf
    eq_duals: Optional[np.ndarray] = None
    ineq_duals: Optional[np.ndarray] = None
    psd_dual: Optional[np.ndarray] = None
    phase1_iterations: int = 0
    phase1_margin: float = np.nan
    history: list = field(default_factory=list)
    message: str = ""


# ---------------------------------------------------------------------------
# conic core:  min c'u  s.t.  G u + s = h,  s in R^m_+ x S^q_+
# ---------------------------------------------------------------------------


@dataclass
class _Cone:
    c: np.ndarray
    G_lp: np.ndarray  # (m, nu)
    h_lp: np.ndarray  # (m,)
    G_psd: np.ndarray  # (nu, q, q)
    h_psd: np.ndarray  # (q, q)

    @property
    def nu(self):
        return self.c.size

    @property
    def degree(self):
        return self.h_lp.size + self.h_psd.shape[0]

    def G(self, u):
        return self.G_lp @ u, np.tensordot(u, self.G_psd, axes=1)

    def Gt(self, z_lp, Z):
        return self.G_lp.T @ z_lp + self.G_psd.reshape(self.nu, -1) @ Z.ravel()

    def slack(self, u):
        g_lp, g_psd = self.G(u)
        S = self.h_psd - g_psd
        return self.h_lp - g_lp, 0.5 * (S + S.T)


def _chol(M):
    try:
        return np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return None


def _lam_min(S):
    if S.shape[0] == 0:
        return np.inf
    return float(np.linalg.eigvalsh(S)[0])


def _cone_step(lam_lp, lam_psd, d_lp, D_psd):
    """Largest step keeping ``lam + a * d`` in the cone (``lam_psd`` diagonal)."""
    amax = np.inf
    neg = d_lp < 0
    if np.any(neg):
        amax = min(amax, float(np.min(-lam_lp[neg] / d_lp[neg])))
    if lam_psd.size:
        isq = 1.0 / np.sqrt(lam_psd)
        M = isq[:, None] * D_psd * isq[None, :]
        mu = np.linalg.eigvalsh(0.5 * (M + M.T))[0]
        if mu < 0:
            amax = min(amax, -1.0 / mu)
    return amax


class _Certifier:
    """Projects dual points onto ``G'z + c = 0`` to obtain certified bounds."""

    def __init__(self, cone: _Cone):
        self.cone = cone
        Gp = cone.G_psd.reshape(cone.nu, -1)
        GtG = cone.G_lp.T @ cone.G_lp + Gp @ Gp.T
        self._pinv = np.linalg.pinv(GtG, rcond=1e-13, hermitian=True)
        self._cnorm = np.linalg.norm(cone.c)
        self._gnorm = np.sqrt(np.linalg.norm(GtG, 2)) if GtG.size else 0.0

    def _tol(self, zc, Zc):
        # round-off level of G'z + c at this dual point
        return 1e-12 * (1.0 + self._cnorm + self._gnorm * (np.linalg.norm(zc) + np.linalg.norm(Zc)))

    def _project(self, z_lp, Z, rd):
        w = self._pinv @ rd
        g_lp, g_psd = self.cone.G(w)
        return z_lp - g_lp, Z - g_psd

    def _bound(self, zc, Zc):
        Zc = 0.5 * (Zc + Zc.T)
        # the bound is only valid on the affine set G'z + c = 0
        res = self.cone.Gt(zc, Zc) + self.cone.c
        if np.linalg.norm(res) > self._tol(zc, Zc):
            zc, Zc = self._project(zc, Zc, res)
            Zc = 0.5 * (Zc + Zc.T)
            if np.linalg.norm(self.cone.Gt(zc, Zc) + self.cone.c) > self._tol(zc, Zc):
                return None
        if np.any(zc <= 0) or (Zc.size and _chol(Zc) is None):
            return None
        return -(self.cone.h_lp @ zc + np.sum(self.cone.h_psd * Zc)), zc, Zc

    def __call__(self, z_lp, Z, rd):
        cert = self._bound(*self._project(z_lp, Z, rd))
        if cert is not None:
            return cert
        # The minimum-norm correction can push near-zero duals of inactive
        # constraints out of the cone.  Weighting by the current point scales
        # each correction with its own component.
        cone = self.cone
        M = cone.G_lp.T @ ((z_lp**2)[:, None] * cone.G_lp)
        if Z.size:
            q = Z.shape[0]
            A = np.matmul(cone.G_psd, Z[None]).reshape(cone.nu, -1)
            At = np.swapaxes(A.reshape(cone.nu, q, q), 1, 2).reshape(cone.nu, -1)
            M = M + A @ At.T
        w = np.linalg.lstsq(0.5 * (M + M.T), rd, rcond=None)[0]
        g_lp, g_psd = cone.G(w)
        return self._bound(z_lp - z_lp**2 * g_lp, Z - Z @ g_psd @ Z if Z.size else Z)


@dataclass
class _State:
    u: np.ndarray
    s_lp: np.ndarray
    S: np.ndarray
    z_lp: np.ndarray
    Z: np.ndarray
    iterations: int = 0
    status: str = MAX_ITER
    pobj: float = np.nan
    dbound: float = -np.inf
    gap: float = np.inf
    history: list = field(default_factory=list)
    stop_reason: str = ""
    certified: Optional[tuple] = None


def _initial_dual(cone: _Cone, s_lp, S):
    inv_lp = 1.0 / s_lp
    invS = np.linalg.inv(S) if S.size else S
    g = cone.Gt(inv_lp, invS)
    mu0 = max(np.linalg.norm(cone.c), 1e-8) / max(np.linalg.norm(g), 1e-300)
    return mu0 * inv_lp, mu0 * 0.5 * (invS + invS.T)


def _path_following(
    cone: _Cone,
    u0: np.ndarray,
    opts: SolverOptions,
    callback: Optional[Callable[[_State], Optional[str]]] = None,
    label: str = "",
    obj_offset: float = 0.0,
) -> _State:
    """Primal-dual path following from the strictly feasible ``u0``.

    ``obj_offset`` is added to the objective before the relative gap test, so
    the tolerance refers to the caller's objective rather than the reduced one.
    """
    s_lp, S = cone.slack(u0)
    if np.any(s_lp <= 0) or (S.size and _chol(S) is None):
        raise RuntimeError("path following needs a strictly feasible start")
    z_lp, Z = _initial_dual(cone, s_lp, S)
    st = _State(u=u0.copy(), s_lp=s_lp, S=S, z_lp=z_lp, Z=Z)
    certify = _Certifier(cone)
    m, q = s_lp.size, S.shape[0]
    deg = cone.degree
    cnorm = np.linalg.norm(cone.c)
    Gp_flat = cone.G_psd.reshape(cone.nu, -1)

    for it in range(opts.max_iter + 1):
        st.iterations = it
        rd = cone.Gt(st.z_lp, st.Z) + cone.c
        g_lp, g_psd = cone.G(st.u)
        rp_lp = g_lp + st.s_lp - cone.h_lp
        rp_psd = g_psd + st.S - cone.h_psd
        sz = st.s_lp @ st.z_lp + np.sum(st.S * st.Z)
        mu = sz / deg
        st.pobj = float(cone.c @ st.u)
        cert = certify(st.z_lp, st.Z, rd)
        if cert is not None:
            st.dbound = float(cert[0])
            st.gap = st.pobj - st.dbound
            st.certified = cert
        else:
            st.dbound = -np.inf
            st.gap = float(sz + abs(st.u @ rd))
        st.history.append((st.pobj, st.dbound))
        if opts.verbose:
            print(
                f"{label}{it:4d}  pobj {st.pobj: .10e}  dbound {st.dbound: .10e}  "
                f"mu {mu:.2e}  |rd| {np.linalg.norm(rd):.2e}"
            )
        if callback is not None:
            reason = callback(st)
            if reason:
                st.stop_reason = reason
                return st
        # a certified bound comes from an exactly dual-feasible point, so it
        # needs no residual test; the uncertified estimate does
        rd_ok = cert is not None or np.linalg.norm(rd) <= opts.feas_tol * (1 + cnorm)
        if rd_ok and st.gap <= opts.gap_tol * (1 + abs(st.pobj + obj_offset)):
            st.status = OPTIMAL
            return st
        if it == opts.max_iter:
            break

        # Nesterov-Todd scaling
        d = np.sqrt(st.s_lp / st.z_lp)
        lam_lp = np.sqrt(st.s_lp * st.z_lp)
        if q:
            Ls, Lz = _chol(st.S), _chol(st.Z)
            if Ls is None or Lz is None:
                st.stop_reason = "lost positive definiteness"
                break
            Uz, lam_psd, Vt = np.linalg.svd(Lz.T @ Ls)
            R = Ls @ Vt.T / np.sqrt(lam_psd)[None, :]
            Rinv = (np.sqrt(lam_psd)[:, None] * Vt) @ sla.solve_triangular(
                Ls, np.eye(q), lower=True
            )
            P = Rinv.T
            M = np.matmul(np.matmul(Rinv[None], cone.G_psd), P[None])
            Mf = M.reshape(cone.nu, -1)
            H = Mf @ Mf.T
        else:
            lam_psd = np.zeros(0)
            R = Rinv = P = np.zeros((0, 0))
            H = np.zeros((cone.nu, cone.nu))
        H += cone.G_lp.T @ ((st.z_lp / st.s_lp)[:, None] * cone.G_lp)
        dg = np.sqrt(np.maximum(np.diag(H), 1e-300))
        Hs = H / dg[:, None] / dg[None, :]
        try:
            cf = sla.cho_factor(Hs, lower=True, check_finite=False)
            solveH = lambda r: sla.cho_solve(cf, r / dg) / dg  # noqa: E731
        except np.linalg.LinAlgError:
            Hp = np.linalg.pinv(Hs, hermitian=True)
            solveH = lambda r: (Hp @ (r / dg)) / dg  # noqa: E731
        PPt = P @ P.T

        def directions(rc_lp, Rc):
            # (W'W)^-1 (W' rc + rp)
            t_lp = (st.z_lp / st.s_lp) * (d * rc_lp + rp_lp)
            T_psd = P @ Rc @ P.T + PPt @ rp_psd @ PPt if q else np.zeros((0, 0))
            rhs = -rd - cone.Gt(t_lp, T_psd)
            du = solveH(rhs)
            for _ in range(2):  # iterative refinement
                du = du + solveH(rhs - H @ du)
            gdu_lp, gdu_psd = cone.G(du)
            dz_lp = (st.z_lp / st.s_lp) * gdu_lp + t_lp
            dZ = PPt @ gdu_psd @ PPt + T_psd if q else np.zeros((0, 0))
            ds_lp = -gdu_lp - rp_lp
            dS = -gdu_psd - rp_psd
            # scaled directions W^-T ds and W dz
            dst_lp, dzt_lp = ds_lp / d, d * dz_lp
            dSt = Rinv @ dS @ Rinv.T if q else dS
            dZt = R.T @ dZ @ R if q else dZ
            return du, ds_lp, dS, dz_lp, dZ, dst_lp, dSt, dzt_lp, dZt

        def jordan_div(rhs_lp, Rhs):
            out_lp = rhs_lp / lam_lp
            out_psd = 2.0 * Rhs / (lam_psd[:, None] + lam_psd[None, :]) if q else Rhs
            return out_lp, out_psd

        def max_step(dst_lp, dSt, dzt_lp, dZt):
            a_s = _cone_step(lam_lp, lam_psd, dst_lp, dSt)
            a_z = _cone_step(lam_lp, lam_psd, dzt_lp, dZt)
            return min(a_s, a_z)

        # predictor
        rc_lp, Rc = jordan_div(-lam_lp**2, -np.diag(lam_psd**2))
        aff = directions(rc_lp, Rc)
        a_aff = min(1.0, max_step(*aff[5:]))
        s_a = (lam_lp + a_aff * aff[5]) @ (lam_lp + a_aff * aff[7])
        if q:
            s_a += np.sum((np.diag(lam_psd) + a_aff * aff[6]) * (np.diag(lam_psd) + a_aff * aff[8]))
        sigma = min(1.0, max(0.0, s_a / sz)) ** 3

        # corrector
        corr_lp = aff[5] * aff[7]
        corr_psd = 0.5 * (aff[6] @ aff[8] + aff[8] @ aff[6]) if q else np.zeros((0, 0))
        rc_lp, Rc = jordan_div(
            sigma * mu - lam_lp**2 - corr_lp,
            sigma * mu * np.eye(q) - np.diag(lam_psd**2) - corr_psd,
        )
        du, ds_lp, dS, dz_lp, dZ, dst_lp, dSt, dzt_lp, dZt = directions(rc_lp, Rc)
        alpha = min(1.0, opts.step_fraction * max_step(dst_lp, dSt, dzt_lp, dZt))
        if not np.isfinite(alpha) or alpha < 1e-14:
            st.stop_reason = "step length collapsed"
            break
        st.u = st.u + alpha * du
        st.s_lp = st.s_lp + alpha * ds_lp
        st.z_lp = st.z_lp + alpha * dz_lp
        S_new = st.S + alpha * dS
        Z_new = st.Z + alpha * dZ
        st.S = 0.5 * (S_new + S_new.T)
        st.Z = 0.5 * (Z_new + Z_new.T)
    st.status = MAX_ITER
    return st


# ---------------------------------------------------------------------------
# problem reduction
# ---------------------------------------------------------------------------


def _psd_basis(n: int) -> np.ndarray:
    """Embedded images of the hvec basis, shape (n^2, 2n, 2n)."""
    eye = np.eye(n * n)
    return np.stack([real_embedding(hmat(e, n)) for e in eye])


@dataclass
class _Reduction:
    y0: np.ndarray
    N: np.ndarray  # y = y0 + N @ (col_scale * u_hat)
    col_scale: np.ndarray
    row_scale: np.ndarray
    kept_rows: np.ndarray
    psd_scale: float
    cone: _Cone
    basis: np.ndarray
    F: np.ndarray
    A: np.ndarray

    def y_of(self, u_hat):
        return self.y0 + self.N @ (self.col_scale * u_hat)


def _reduce(prob: HermitianSdp, opts: SolverOptions):
    n = prob.dim
    p = prob.n_vars
    nx = n * n
    c = np.zeros(p)
    c[:nx] = hvec(prob.objective)
    if prob.has_epigraph:
        c[nx] = prob.c_t
    A = np.zeros((prob.eq_matrices.shape[0], p))
    A[:, :nx] = hvec(prob.eq_matrices)
    F = np.zeros((prob.ineq_matrices.shape[0], p))
    F[:, :nx] = hvec(prob.ineq_matrices)
    if prob.has_epigraph:
        F[:, nx] = prob.ineq_t
    b = prob.eq_rhs

    if A.shape[0]:
        U, sv, Vt = np.linalg.svd(A, full_matrices=True)
        tol = 1e-10 * (sv[0] if sv.size else 0.0)
        r = int(np.sum(sv > tol))
        y0 = Vt[:r].T @ ((U[:, :r].T @ b) / sv[:r])
        resid = np.linalg.norm(A @ y0 - b)
        if resid > opts.feas_tol * (1 + np.linalg.norm(b)):
            return None, f"equality constraints are inconsistent (residual {resid:.3e})"
        Nmat = Vt[r:].T
    else:
        y0 = np.zeros(p)
        Nmat = np.eye(p)
    if Nmat.shape[1] == 0:
        Nmat = np.zeros((p, 0))

    basis = _psd_basis(n)
    G_lp = F @ Nmat
    h_lp = prob.ineq_rhs - F @ y0
    G_psd = -np.tensordot(Nmat[:nx].T, basis, axes=1)
    h_psd = np.tensordot(y0[:nx], basis, axes=1) - prob.floor * np.eye(2 * n)

    # drop constant rows, normalize the rest
    rn = np.linalg.norm(G_lp, axis=1)
    const = rn <= 1e-14 * max(1.0, float(np.max(rn, initial=0.0)))
    if np.any(h_lp[const] < -opts.feas_tol):
        return None, "a constant inequality row is violated"
    kept = np.flatnonzero(~const)
    row_scale = rn[kept]
    G_lp = G_lp[kept] / row_scale[:, None]
    h_lp = h_lp[kept] / row_scale

    hn = np.linalg.norm(h_psd)
    gn = np.sqrt(np.mean(np.sum(G_psd**2, axis=(1, 2)))) if G_psd.shape[0] else 0.0
    ref = hn / np.sqrt(2 * n) if hn > 0 else gn
    psd_scale = 1.0 / ref if ref > 0 else 1.0
    G_psd = G_psd * psd_scale
    h_psd = h_psd * psd_scale

    col = np.sqrt(np.sum(G_lp**2, axis=0) + np.sum(G_psd**2, axis=(1, 2)))
    col = np.where(col > 0, col, 1.0)
    col_scale = 1.0 / col
    G_lp = G_lp * col_scale[None, :]
    G_psd = G_psd * col_scale[:, None, None]
    c_u = (Nmat.T @ c) * col_scale
    cone = _Cone(c=c_u, G_lp=G_lp, h_lp=h_lp, G_psd=G_psd, h_psd=h_psd)
    red = _Reduction(
        y0=y0, N=Nmat, col_scale=col_scale, row_scale=row_scale, kept_rows=kept,
        psd_scale=psd_scale, cone=cone, basis=basis, F=F, A=A,
    )
    return red, ""


# Phase 1 stops at this margin.  Larger margins can force the epigraph
# variable to huge values, and phase 2 then starts far from the optimum.
_PHASE1_MARGIN = 1e-4


def _phase1(cone: _Cone, opts: SolverOptions):
    """Maximize the uniform margin; returns (u, tau, iterations, verdict)."""
    nu, m, q = cone.nu, cone.h_lp.size, cone.h_psd.shape[0]
    cap = 1.0
    G1_lp = np.zeros((m + 1, nu + 1))
    G1_lp[:m, :nu] = cone.G_lp
    G1_lp[:m, nu] = -1.0
    G1_lp[m, nu] = -1.0
    h1_lp = np.concatenate([cone.h_lp, [cap]])
    G1_psd = np.zeros((nu + 1, q, q))
    G1_psd[:nu] = cone.G_psd
    G1_psd[nu] = -np.eye(q)
    c1 = np.zeros(nu + 1)
    c1[nu] = 1.0
    ph = _Cone(c=c1, G_lp=G1_lp, h_lp=h1_lp, G_psd=G1_psd, h_psd=cone.h_psd)

    lam = min(np.min(cone.h_lp, initial=np.inf), _lam_min(cone.h_psd))
    tau0 = max(0.0, -lam) + cap
    v0 = np.zeros(nu + 1)
    v0[nu] = tau0

    best = {"u": None, "tau": np.inf}

    def watch(st: _State):
        tau = st.u[-1]
        if tau < best["tau"]:
            best["u"], best["tau"] = st.u[:-1].copy(), tau
        if tau <= -_PHASE1_MARGIN * cap:
            return "margin"
        if st.dbound > opts.feas_tol:
            return "certified infeasible"
        return None

    cap_iter = opts.max_iter if opts.phase1_max_iter is None else opts.phase1_max_iter
    p1opts = SolverOptions(
        gap_tol=opts.gap_tol, feas_tol=opts.feas_tol, max_iter=cap_iter,
        step_fraction=opts.step_fraction, verbose=opts.verbose,
    )
    st = _path_following(ph, v0, p1opts, callback=watch, label="[phase1] ")
    tau = best["tau"]
    if st.stop_reason == "certified infeasible":
        return None, tau, st.iterations, "no feasible point (certified)"
    if tau < 0:
        u = best["u"]
        s_lp, S = cone.slack(u)
        if np.all(s_lp > 0) and (S.size == 0 or _chol(S) is not None):
            return u, tau, st.iterations, ""
    if st.status == MAX_ITER and not st.stop_reason and st.iterations >= cap_iter:
        return None, tau, st.iterations, "iteration cap reached before a strictly feasible point"
    return None, tau, st.iterations, f"no strictly feasible point (phase-1 margin {-tau:.3e})"


def solve(problem: HermitianSdp, opts: Optional[SolverOptions] = None) -> SdpSolution:
    """Solve ``problem``; never raises on infeasibility, see ``status``."""
    opts = opts or SolverOptions()
    red, msg = _reduce(problem, opts)
    if red is None:
        return SdpSolution(None, None, np.nan, np.inf, 0, INFEASIBLE, message=msg)
    cone = red.cone
    u_feas, tau, it1, msg = _phase1(cone, opts)
    if u_feas is None:
        status = MAX_ITER if msg.startswith("iteration cap") else INFEASIBLE
        return SdpSolution(
            None, None, np.nan, np.inf, 0, status,
            phase1_iterations=it1, phase1_margin=-tau, message=msg,
        )
    n = problem.dim
    nx = n * n
    c_full = np.zeros(problem.n_vars)
    c_full[:nx] = hvec(problem.objective)
    if problem.has_epigraph:
        c_full[nx] = problem.c_t
    st = _path_following(
        cone, u_feas, opts, label="[phase2] ", obj_offset=float(c_full @ red.y0)
    )

    y = red.y_of(st.u)
    X = hmat(y[:nx], n)
    t = float(y[nx]) if problem.has_epigraph else None
    obj = float(c_full @ y)
    offset = obj - st.pobj
    dual_bound = st.dbound + offset if np.isfinite(st.dbound) else -np.inf
    history = [(p + offset, d + offset) for p, d in st.history]

    eq_duals = ineq_duals = psd_dual = None
    if st.certified is not None:
        _, zc, Zc = st.certified
        ineq_duals = np.zeros(problem.ineq_matrices.shape[0])
        ineq_duals[red.kept_rows] = zc / red.row_scale
        Z_emb = red.psd_scale * Zc
        psd_dual = 2.0 * hermitian_from_embedding(Z_emb)
        if red.A.shape[0]:
            bstar = np.tensordot(red.basis, Z_emb, axes=([1, 2], [0, 1]))
            stat = c_full + red.F.T @ ineq_duals
            stat[:nx] -= bstar
            eq_duals = np.linalg.lstsq(red.A.T, -stat, rcond=None)[0]

    return SdpSolution(
        X=0.5 * (X + X.conj().T),
        t=t,
        objective_value=obj,
        duality_gap=float(st.gap),
        iterations=st.iterations,
        status=st.status,
        dual_bound=dual_bound,
        eq_duals=eq_duals,
        ineq_duals=ineq_duals,
        psd_dual=psd_dual,
        phase1_iterations=it1,
        phase1_margin=-tau,
        history=history,
        message=st.stop_reason,
    )
