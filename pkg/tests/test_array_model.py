import numpy as np
import pytest
from hypothesis import given, strategies as st

from idealsdp.array_model import (
    PASSBAND,
    SIDELOBE,
    TRANSITION,
    AngleGrid,
    ArrayGeometry,
    beampattern,
    direction_of_root,
    label_grid,
    make_grid,
    root_of_direction,
    steering_matrix,
    steering_vector,
    to_db,
    variety_from_directions,
)
from idealsdp.errors import AmbiguityError, DomainError
from idealsdp.polyideal import ideal_basis


def test_geometry_validation():
    with pytest.raises(DomainError):
        ArrayGeometry(1)
    with pytest.raises(DomainError):
        ArrayGeometry(4, 0.0)
    assert ArrayGeometry(4).spacing == 0.5


def test_steering_examples():
    np.testing.assert_array_equal(steering_vector(ArrayGeometry(4), 0.0), np.ones(4))
    np.testing.assert_allclose(steering_vector(ArrayGeometry(2), 90.0), [1, -1], atol=1e-15)
    n = np.arange(20)
    np.testing.assert_allclose(
        steering_vector(ArrayGeometry(20), 30.0), np.exp(1j * np.pi * n / 2), atol=1e-12
    )
    assert np.allclose(np.abs(steering_matrix(ArrayGeometry(7), [-40, 3, 88])), 1)


def test_root_of_direction_examples():
    g = ArrayGeometry(4)
    assert root_of_direction(g, 0.0) == 1
    assert abs(root_of_direction(g, 90.0) + 1) < 1e-15
    assert abs(root_of_direction(g, -13.0) - np.exp(-1j * np.pi * np.sin(np.deg2rad(13)))) < 1e-15


@pytest.mark.parametrize("theta", [-91.0, 90.5, np.nan])
def test_angle_domain(theta):
    with pytest.raises(DomainError):
        steering_vector(ArrayGeometry(4), theta)


@given(st.floats(-89.999, 89.999))
def test_direction_round_trip(theta):
    g = ArrayGeometry(8)
    assert abs(direction_of_root(g, root_of_direction(g, theta)) - theta) < 1e-7


def test_direction_aliasing():
    g = ArrayGeometry(8, spacing=1.0)
    with pytest.raises(AmbiguityError):
        direction_of_root(g, root_of_direction(g, 60.0))
    # small spacing never aliases
    g = ArrayGeometry(8, spacing=0.25)
    assert abs(direction_of_root(g, root_of_direction(g, 60.0)) - 60.0) < 1e-9


def test_grid_labels_example1():
    grid = make_grid([(-15, 15)], 5.0, 0.25)
    assert len(grid) == 721
    assert grid.mask(PASSBAND).sum() == 121
    # open transition band: 19 samples per edge; +-20 deg is sidelobe
    assert grid.mask(TRANSITION).sum() == 38
    i = int(np.argmin(np.abs(grid.angles - 20.0)))
    assert grid.labels[i] == SIDELOBE
    assert grid.usable.sum() == 721 - 38


def test_grid_inserts_directions():
    grid = make_grid([(-15, 15)], step=1.0, include=[33.3])
    assert 33.3 in grid.angles
    assert np.all(np.diff(grid.angles) > 0)


def test_grid_validation():
    with pytest.raises(DomainError):
        AngleGrid([0, 0], [SIDELOBE, SIDELOBE])
    with pytest.raises(DomainError):
        AngleGrid([0, 1], [SIDELOBE, "stopband"])
    with pytest.raises(DomainError):
        make_grid([(10, -10)])
    g = label_grid([-20.0, 0.0, 12.0], [(-5, 5)], 10.0)
    assert list(g.labels) == [SIDELOBE, PASSBAND, TRANSITION]


def test_beampattern_examples():
    g = ArrayGeometry(6)
    np.testing.assert_allclose(beampattern(np.eye(6), g, [-30, 0, 45]), 6)
    a = steering_vector(g, 17.0)
    assert abs(beampattern(np.outer(a, a.conj()), g, [17.0])[0] - 36) < 1e-10


def test_beampattern_rejects_non_hermitian():
    g = ArrayGeometry(3)
    X = np.eye(3, dtype=complex)
    X[0, 1] = 1j
    with pytest.raises(DomainError):
        beampattern(X, g, [0])
    with pytest.raises(DomainError):
        beampattern(-np.eye(3), g, [0])


def test_null_iff_ideal_membership(rng):
    g = ArrayGeometry(10)
    dirs = [-40.0, 12.0, 55.0]
    Q = ideal_basis(variety_from_directions(g, dirs), 10).Q
    # inside the ideal: nulls
    W = Q @ (rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3)))
    X = W @ W.conj().T
    G = beampattern(X, g, dirs)
    assert np.max(G) <= 1e-10 * np.trace(X).real
    # a column outside the ideal breaks at least one null
    W2 = W.copy()
    W2[:, 0] += rng.normal(size=10)
    X2 = W2 @ W2.conj().T
    assert np.max(beampattern(X2, g, dirs)) > 1e-6 * np.trace(X2).real


def test_sos_structure(rng):
    g = ArrayGeometry(8)
    W = rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3))
    angles = np.linspace(-80, 80, 33)
    A = steering_matrix(g, angles)
    sos = np.sum(np.abs(A.conj().T @ W) ** 2, axis=1)
    np.testing.assert_allclose(beampattern(W @ W.conj().T, g, angles), sos, rtol=1e-10)


def test_conjugate_symmetry_of_real_X(rng):
    g = ArrayGeometry(9)
    B = rng.normal(size=(9, 9))
    X = B @ B.T
    angles = np.linspace(0, 85, 18)
    np.testing.assert_allclose(
        beampattern(X, g, angles), beampattern(X, g, -angles), rtol=1e-10
    )


def test_to_db_floor():
    np.testing.assert_array_equal(to_db([0.0, 1.0, 100.0]), [-400.0, 0.0, 20.0])
