import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idealsdp.array_model import ArrayGeometry, root_of_direction, steering_matrix
from idealsdp.errors import AmbiguityError, DimensionError, DomainError, PreconditionError
from idealsdp.polyideal import Poly, Variety, generator_poly, poly_divmod, poly_mul
from idealsdp.subspace_id import (
    EigenSplit,
    SnapshotModel,
    eigendecompose,
    eigenvector_roots,
    estimate_directions,
    monte_carlo,
    rmse,
    root_music_baseline,
    root_music_polynomial,
    sample_covariance,
    select_noise_subspace,
    simulate_snapshots,
)


def exact_covariance(geom, dirs, powers=None):
    A = steering_matrix(geom, dirs)
    p = np.ones(len(dirs)) if powers is None else np.asarray(powers)
    return (A * p) @ A.conj().T


# -- model and covariance -----------------------------------------------------

def test_model_validation():
    g = ArrayGeometry(4)
    with pytest.raises(DimensionError):
        SnapshotModel(g, (0, 10, 20, 30))
    with pytest.raises(DomainError):
        SnapshotModel(g, (0,), noise_var=-1)
    with pytest.raises(DomainError):
        SnapshotModel(g, (0,), T=0)
    with pytest.raises(DimensionError):
        SnapshotModel(g, (0, 10), source_powers=(1,))


def test_noiseless_single_source_structure():
    g = ArrayGeometry(6)
    R = sample_covariance(SnapshotModel(g, (20.0,), noise_var=0.0, T=3, seed=1))
    a = steering_matrix(g, [20.0])[:, 0]
    scale = R[0, 0].real
    np.testing.assert_allclose(R, scale * np.outer(a, a.conj()), atol=1e-12 * scale)


def test_noise_only_covariance_near_identity():
    g = ArrayGeometry(5)
    R = sample_covariance(SnapshotModel(g, (), noise_var=1.0, T=100_000, seed=7))
    assert np.linalg.norm(R - np.eye(5), 2) <= 0.05


def test_noiseless_rank_and_full_rank_with_noise():
    g = ArrayGeometry(6)
    R0 = sample_covariance(SnapshotModel(g, (-10, 25), noise_var=0.0, T=50, seed=2))
    assert np.linalg.matrix_rank(R0, tol=1e-9 * np.abs(R0).max()) == 2
    R1 = sample_covariance(SnapshotModel(g, (-10, 25), noise_var=0.1, T=6, seed=2))
    assert np.linalg.matrix_rank(R1) == 6
    np.testing.assert_allclose(R1, R1.conj().T)


def test_simulation_is_seeded():
    m = SnapshotModel(ArrayGeometry(4), (5.0,), noise_var=0.3, T=10, seed=11)
    np.testing.assert_array_equal(simulate_snapshots(m), simulate_snapshots(m))


# -- eigenvector roots ----------------------------------------------------------

def test_roots_examples():
    a = np.exp(0.4j)
    np.testing.assert_allclose(eigenvector_roots(np.array([-a, 1, 0, 0, 0])), [a])
    r = np.sort_complex(eigenvector_roots(np.array([-1, 0, 1, 0])))
    np.testing.assert_allclose(r, [-1, 1], atol=1e-14)
    with pytest.raises(DomainError):
        eigenvector_roots(np.zeros(4))


@given(st.integers(2, 16), st.integers(0, 10_000))
def test_roots_reexpand(N, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=N) + 1j * rng.normal(size=N)
    r = eigenvector_roots(v)
    assert r.size == N - 1
    rebuilt = v[-1] * generator_poly(Variety(r)).coeffs
    assert np.max(np.abs(rebuilt - v)) <= 1e-8 * np.max(np.abs(v))


# -- noiseless ideal structure -----------------------------------------------------

def test_noiseless_factorization_and_orthogonality():
    g = ArrayGeometry(6)
    dirs = [-10.0, 25.0]
    lam, V = eigendecompose(exact_covariance(g, dirs))
    Qn = V[:, 2:]
    A = steering_matrix(g, dirs)
    assert np.max(np.abs(A.conj().T @ Qn)) <= 1e-10
    gen = generator_poly(Variety(np.conj(root_of_direction(g, np.array(dirs)))))
    cofactors = []
    for col in Qn.T:
        q, r = poly_divmod(Poly(col), gen)
        assert np.max(np.abs(r.coeffs)) <= 1e-8
        cofactors.append(q)
    # cofactors are pairwise coprime: no shared roots
    roots = [eigenvector_roots(q.padded(q.coeffs.size)) for q in cofactors]
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            d = np.min(np.abs(roots[i][:, None] - roots[j][None, :]))
            assert d > 1e-6


def test_noiseless_selection_returns_noise_eigenvectors():
    g = ArrayGeometry(6)
    R = exact_covariance(g, [-10.0, 25.0])
    lam, V = eigendecompose(R)
    split = select_noise_subspace((lam, V), 2)
    assert split.selected_noise_indices == (2, 3, 4, 5)
    assert split.L == 2
    gen = generator_poly(Variety(np.conj(root_of_direction(g, np.array([-10.0, 25.0])))))
    for col in split.noise_vectors.T:
        _, r = poly_divmod(Poly(col), gen)
        assert np.max(np.abs(r.coeffs)) <= 1e-8


def test_selection_precondition():
    lam, V = eigendecompose(exact_covariance(ArrayGeometry(4), [0.0]))
    with pytest.raises(PreconditionError):
        select_noise_subspace((lam, V), 0)
    with pytest.raises(PreconditionError):
        select_noise_subspace((lam, V), 4)


def test_eigensplit_checks_orthonormality():
    with pytest.raises(DomainError):
        EigenSplit(np.ones(3), np.ones((3, 3)), (1, 2), np.zeros(3))


def test_noiseless_directions_exact():
    g = ArrayGeometry(6)
    split = select_noise_subspace(eigendecompose(exact_covariance(g, [-10.0, 25.0])), 2)
    est = estimate_directions(split, g)
    np.testing.assert_allclose(est.angles, [-10, 25], atol=1e-6)
    assert np.all(est.dispersion < 1e-6)


def test_single_broadside_source():
    g = ArrayGeometry(5)
    split = select_noise_subspace(eigendecompose(exact_covariance(g, [0.0])), 1)
    est = estimate_directions(split, g)
    assert abs(est.centroids[0] - 1) < 1e-7 and abs(est.angles[0]) < 1e-6


def test_aliasing_raises():
    g = ArrayGeometry(6, spacing=1.0)
    split = select_noise_subspace(eigendecompose(exact_covariance(g, [60.0])), 1)
    with pytest.raises(AmbiguityError):
        estimate_directions(split, g)


@pytest.mark.parametrize("noise_var", [1e-2, 1e-4, 1e-6])
def test_consistency_with_eigenvalue_selection(noise_var):
    g = ArrayGeometry(6)
    m = SnapshotModel(g, (-10.0, 25.0), noise_var=noise_var, T=10_000, seed=5)
    lam, V = eigendecompose(sample_covariance(m))
    split = select_noise_subspace((lam, V), 2)
    assert split.selected_noise_indices == (2, 3, 4, 5)


# -- root-MUSIC ---------------------------------------------------------------------

def test_root_music_polynomial_is_quadratic_form(rng):
    g = ArrayGeometry(5)
    _, V = eigendecompose(exact_covariance(g, [12.0]))
    Qn = V[:, 1:]
    c = root_music_polynomial(Qn)
    z = np.exp(0.7j)
    a = z ** np.arange(5)
    direct = np.real(a.conj() @ Qn @ Qn.conj().T @ a)
    via_poly = np.polyval(c[::-1], z) / z**4
    assert abs(via_poly - direct) < 1e-12


def test_root_music_noiseless_exact():
    g = ArrayGeometry(8)
    _, V = eigendecompose(exact_covariance(g, [-33.0, 5.0, 47.0]))
    np.testing.assert_allclose(root_music_baseline(V[:, 3:], g, 3), [-33, 5, 47], atol=1e-6)


def test_root_music_agrees_with_clustering_small():
    g = ArrayGeometry(4)
    lam, V = eigendecompose(exact_covariance(g, [18.0]))
    a = root_music_baseline(V[:, 1:], g, 1)
    b = estimate_directions(select_noise_subspace((lam, V), 1), g).angles
    np.testing.assert_allclose(a, b, atol=1e-6)


# -- Monte Carlo ---------------------------------------------------------------------

def test_monte_carlo_rows_and_rmse():
    m = SnapshotModel(ArrayGeometry(8), (-20.0, 30.0), noise_var=1.0, T=20, seed=3)
    rows = monte_carlo(m, 25)
    assert len(rows) == 25 * 2 * 2
    assert {r[1] for r in rows} == {"clustering", "root_music"}
    assert rows == monte_carlo(m, 25)
    assert np.isfinite(rmse(rows, "root_music"))
    assert np.isnan(rmse(rows, "unknown"))
