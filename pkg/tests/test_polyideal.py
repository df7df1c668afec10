import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import null_space, subspace_angles

from idealsdp.errors import ConfigError, DimensionError, DomainError
from idealsdp.polyideal import (
    Poly,
    Variety,
    elementary_symmetric,
    extend_variety,
    generator_poly,
    ideal_basis,
    poly_divmod,
    poly_eval,
    poly_mul,
    toeplitz_basis,
)

from conftest import unit_roots


# -- elementary symmetric functions and generators ---------------------------

@pytest.mark.parametrize("k, expected", [(0, 1), (1, 6), (2, 11), (3, 6)])
def test_elementary_symmetric_small(k, expected):
    assert elementary_symmetric([1, 2, 3], k) == expected


@pytest.mark.parametrize("k", [-1, 4])
def test_elementary_symmetric_range(k):
    with pytest.raises(DomainError):
        elementary_symmetric([1, 2, 3], k)


def test_elementary_symmetric_matches_subsets(rng):
    from itertools import combinations

    r = rng.normal(size=6) + 1j * rng.normal(size=6)
    for k in range(7):
        brute = sum(np.prod(c) for c in combinations(r, k)) if k else 1.0
        assert abs(elementary_symmetric(r, k) - brute) <= 1e-12 * max(1, abs(brute))


def test_generator_examples():
    a = np.exp(0.3j)
    np.testing.assert_array_equal(generator_poly(Variety([a])).coeffs, [-a, 1])
    np.testing.assert_array_equal(generator_poly(Variety([1, -1])).coeffs, [-1, 0, 1])
    np.testing.assert_array_equal(generator_poly(Variety([1, 2, 3])).coeffs, [-6, 11, -6, 1])


@given(st.integers(1, 12), st.integers(0, 10_000))
def test_generator_vanishes_on_variety(L, seed):
    r = unit_roots(np.random.default_rng(seed), L)
    g = generator_poly(Variety(r))
    assert g.degree == L and g.coeffs[-1] == 1
    scale = np.max(np.abs(g.coeffs))
    assert np.max(np.abs(poly_eval(g, r))) <= 1e-10 * scale


def test_generator_matches_numpy_poly(rng):
    r = unit_roots(rng, 9)
    np.testing.assert_allclose(generator_poly(Variety(r)).coeffs, np.poly(r)[::-1], atol=1e-12)


# -- Toeplitz basis -----------------------------------------------------------

def test_toeplitz_shift_example():
    a = 0.6 + 0.8j
    Q = toeplitz_basis(Poly([-a, 1]), 3).Q
    np.testing.assert_array_equal(Q, [[-a, 0], [1, -a], [0, 1]])


def test_toeplitz_annihilates_vandermonde():
    basis = toeplitz_basis(Poly([-1, 0, 1]), 4, variety=Variety([1, -1]))
    assert basis.Q.shape == (4, 2)
    A = np.vander(np.conj([1, -1]), 4, increasing=True).T  # columns a = conj(root)^n
    assert np.max(np.abs(A.conj().T @ basis.Q)) == 0


def test_toeplitz_too_many_roots():
    with pytest.raises(DimensionError, match="no degrees of freedom"):
        toeplitz_basis(Poly(np.ones(6)), 5)


@given(st.integers(2, 24), st.data())
def test_ideal_basis_invariants(N, data):
    L = data.draw(st.integers(1, N - 1))
    r = unit_roots(np.random.default_rng(data.draw(st.integers(0, 10_000))), L)
    b = ideal_basis(Variety(r), N)
    Q = b.Q
    assert Q.shape == (N, N - L) and b.K == N - L and b.L == L
    # Toeplitz and shifted generator columns
    np.testing.assert_array_equal(Q[1:, 1:], Q[:-1, :-1])
    for j in range(N - L):
        col = np.zeros(N, complex)
        col[j : j + L + 1] = b.generator.coeffs
        np.testing.assert_array_equal(Q[:, j], col)
    A = np.vander(np.conj(r), N, increasing=True).T
    assert np.max(np.abs(A.conj().T @ Q)) <= 1e-10 * np.max(np.abs(Q)) * N
    assert np.linalg.matrix_rank(Q) == N - L


def test_example1_basis_rank():
    from idealsdp.array_model import ArrayGeometry, variety_from_directions

    angs = [75, 60, 50, 43, 34, 33, 26, 22]
    V = variety_from_directions(ArrayGeometry(20), angs + [-a for a in angs])
    b = ideal_basis(V, 20)
    assert b.Q.shape == (20, 4)
    assert np.linalg.matrix_rank(b.Q) == 4


# -- properties ---------------------------------------------------------------

@given(st.integers(3, 20), st.data())
def test_ideal_closure(N, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10_000)))
    L = data.draw(st.integers(1, N - 1))
    b = ideal_basis(Variety(unit_roots(rng, L)), N)
    # generator * g for g in C_{N-L}[x] equals Q @ g
    g = rng.normal(size=N - L) + 1j * rng.normal(size=N - L)
    prod = poly_mul(b.generator, Poly(g)).padded(N)
    np.testing.assert_allclose(b.Q @ g, prod, atol=1e-10 * np.max(np.abs(prod)))
    # and the product lies in span(Q)
    coef, *_ = np.linalg.lstsq(b.Q, prod, rcond=None)
    assert np.linalg.norm(b.Q @ coef - prod) <= 1e-10 * np.linalg.norm(prod)


@given(st.integers(2, 24), st.data())
def test_basis_equivalence_with_numerical_nullspace(N, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10_000)))
    L = data.draw(st.integers(1, min(N - 1, 8)))
    r = unit_roots(rng, L)
    Q = ideal_basis(Variety(r), N).Q
    A = np.vander(np.conj(r), N, increasing=True).T
    ns = null_space(A.conj().T)
    assert ns.shape[1] == N - L
    assert np.max(subspace_angles(Q, ns)) <= 1e-8


@given(st.integers(4, 20), st.data())
def test_inclusion_reversal(N, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10_000)))
    L0 = data.draw(st.integers(1, N - 2))
    L1 = data.draw(st.integers(L0, N - 1))
    base = Variety(unit_roots(rng, L0))
    policy = data.draw(st.sampled_from(["multiplicity", "explicit"]))
    ext = extend_variety(base, L1, policy, extra=unit_roots(rng, L1 - L0))
    assert len(ext) == L1 and ext.contains(base)
    Qb = ideal_basis(base, N).Q
    Qe = ideal_basis(ext, N).Q
    coef, *_ = np.linalg.lstsq(Qb, Qe, rcond=None)
    resid = np.linalg.norm(Qb @ coef - Qe, axis=0) / np.linalg.norm(Qe, axis=0)
    assert np.max(resid) <= 1e-9


def test_multiplicity_distinction():
    a = np.exp(-1j * np.pi * np.sin(np.deg2rad(-13)))
    single = Variety([a])
    double = extend_variety(single, 2)
    N = 20
    assert ideal_basis(double, N).K == ideal_basis(single, N).K - 1
    A1 = np.vander(np.conj(single.roots), N, increasing=True)
    A2 = np.vander(np.conj(double.roots), N, increasing=True)
    assert np.linalg.matrix_rank(A1) == np.linalg.matrix_rank(A2) == 1


def test_extend_variety_examples():
    a = np.exp(-1j * np.pi * np.sin(np.deg2rad(-13)))
    v3 = extend_variety(Variety([a]), 3)
    np.testing.assert_array_equal(v3.roots, [a, a, a])
    base = Variety(np.exp(1j * np.array([0.1, 0.7, 1.9, 2.5])))
    ext = extend_variety(base, 17)
    assert len(ext) == 17 and ideal_basis(ext, 20).K == 3
    np.testing.assert_array_equal(extend_variety(base, 4).roots, base.roots)


def test_extend_variety_errors():
    base = Variety([1, -1])
    with pytest.raises(DomainError):
        extend_variety(base, 1)
    with pytest.raises(ConfigError):
        extend_variety(base, 4, "explicit")
    with pytest.raises(ConfigError):
        extend_variety(base, 4, "bogus")


def test_multiplicity_merges_near_duplicates():
    v = extend_variety(Variety([1.0, 1.0 + 1e-14, -1.0]), 4)
    assert v.roots[1] == v.roots[0]


def test_variety_rejects_empty():
    with pytest.raises(DomainError):
        Variety([])


# -- polynomial arithmetic ----------------------------------------------------

def test_poly_examples():
    p = Poly([3, -1, 2])
    assert poly_mul(Poly([1]), p) == p
    assert poly_eval(Poly([-6, 11, -6, 1]), 2) == 0
    assert poly_mul(Poly([-1, 1]), Poly([1, 1])) == Poly([-1, 0, 1])


def test_poly_normalization():
    assert Poly([1, 2, 0, 0]).degree == 1
    assert Poly([0, 0]).degree == -1
    assert Poly([1, 2]).in_space(2) and not Poly([1, 2, 3]).in_space(2)
    with pytest.raises(DimensionError):
        Poly([1, 2, 3]).padded(2)


int_polys = st.lists(st.integers(-20, 20), min_size=1, max_size=8).map(Poly)


@given(int_polys, int_polys, int_polys)
def test_ring_axioms_exact(a, b, c):
    zero = Poly([0])
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + zero == a
    assert a + (-a) == zero
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(int_polys, int_polys)
def test_divmod_reconstructs(num, den):
    if den.degree < 0:
        return
    q, r = poly_divmod(num, den)
    assert r.degree < max(den.degree, 1)
    rec = q * den + r
    np.testing.assert_allclose(rec.padded(num.coeffs.size), num.padded(num.coeffs.size), atol=1e-6)
