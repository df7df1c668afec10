"""Independent reference computations used by the tests."""

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar

from idealsdp.sdp_solver import HermitianSdp, hmat, hvec


def random_hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (A + A.conj().T)


def random_pd(rng, n, shift=1.0):
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return B @ B.conj().T + shift * np.eye(n)


def slice_instance(rng, n):
    """Hermitian n x n SDP whose feasible set is a 2-D slice of the PSD cone.

    Returns (C, A_list, b, X0) with X0 strictly feasible.
    """
    m = n * n - 2
    X0 = random_pd(rng, n)
    A = np.stack([random_hermitian(rng, n) for _ in range(m)])
    b = np.real(np.einsum("kij,ji->k", A, X0))
    C = random_pd(rng, n, shift=0.5)  # bounded below on the PSD cone
    return C, A, b, X0


def brute_force_slice_min(C, A, X0, n_angles=3600):
    """Minimize Re tr(C X) over {X0 + N u} intersected with the PSD cone.

    Rays from X0 meet the cone boundary at r = 1 / lambda_max(-X0^-1/2 D X0^-1/2);
    the objective along the boundary curve is scanned on a dense angle grid and
    refined by bounded scalar minimization around the best sample.
    """
    n = X0.shape[0]
    basis = null_space(hvec(A))  # real coordinates of the 2-D slice
    assert basis.shape[1] == 2
    D1, D2 = hmat(basis[:, 0], n), hmat(basis[:, 1], n)
    w, U = np.linalg.eigh(X0)
    isq = U @ np.diag(w**-0.5) @ U.conj().T

    def boundary_obj(phi):
        D = np.cos(phi) * D1 + np.sin(phi) * D2
        lam = np.linalg.eigvalsh(-isq @ D @ isq)[-1]
        if lam <= 0:
            return np.inf
        X = X0 + D / lam
        return float(np.real(np.trace(C @ X)))

    phis = np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
    vals = np.array([boundary_obj(p) for p in phis])
    k = int(np.argmin(vals))
    h = phis[1] - phis[0]
    res = minimize_scalar(
        boundary_obj,
        bounds=(phis[k] - h, phis[k] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return min(res.fun, vals[k])


def random_epigraph_problem(rng, n, me, mi, floor=0.05):
    """Feasible, bounded epigraph SDP with a strictly feasible point."""
    X0 = random_pd(rng, n)
    A = np.array([random_hermitian(rng, n) for _ in range(me)]).reshape(me, n, n)
    b = np.real(np.einsum("kij,ji->k", A, X0))
    F = np.stack([random_hermitian(rng, n) for _ in range(mi)])
    h = np.real(np.einsum("kij,ji->k", F, X0)) + rng.uniform(0.1, 1.0, mi)
    # C + F_k >= 0 keeps the epigraph problem bounded below
    C = random_pd(rng, n, 0.2) + np.max(np.abs(np.linalg.eigvalsh(F))) * np.eye(n)
    return HermitianSdp(
        dim=n, objective=C, c_t=1.0, has_epigraph=True,
        eq_matrices=A, eq_rhs=b, ineq_matrices=F, ineq_t=-np.ones(mi), ineq_rhs=h,
        floor=floor,
    )
