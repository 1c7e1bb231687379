import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geophase.linalg import is_unitary
from geophase.spin import (DensityMatrix, build_spin, diagonal_state, maximally_mixed,
                           pure_state_along, rotation_unitary, unit)
from oracles import random_unit, su2_rodrigues

axes = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1).map(unit)


def test_spin_half_matrices():
    s = build_spin(1)
    assert np.array_equal(s.jz, np.diag([0.5, -0.5]))
    assert np.allclose(s.jx, np.array([[0, 1], [1, 0]]) / 2, atol=1e-16)
    assert np.allclose(s.jy, np.array([[0, -1j], [1j, 0]]) / 2, atol=1e-16)


def test_spin_one_jz():
    assert np.array_equal(build_spin(2).jz, np.diag([1.0, 0.0, -1.0]))


@pytest.mark.parametrize("two_j", range(0, 15))
def test_angular_momentum_algebra(two_j):
    s = build_spin(two_j)
    j = two_j / 2
    for a, b, c in ((s.jx, s.jy, s.jz), (s.jy, s.jz, s.jx), (s.jz, s.jx, s.jy)):
        assert np.max(np.abs(a @ b - b @ a - 1j * c)) < 1e-12
    casimir = s.jx @ s.jx + s.jy @ s.jy + s.jz @ s.jz
    assert np.max(np.abs(casimir - j * (j + 1) * np.eye(s.dim))) < 1e-12


def test_build_spin_rejects_negative():
    with pytest.raises(ValueError):
        build_spin(-1)


def test_rotation_examples(rng):
    s = build_spin(1)
    n = random_unit(rng)
    assert np.allclose(rotation_unitary(s, n, 0.0), np.eye(2), atol=0)
    assert np.max(np.abs(rotation_unitary(s, n, 2 * np.pi) + np.eye(2))) < 1e-12
    assert np.max(np.abs(rotation_unitary(build_spin(2), n, 2 * np.pi) - np.eye(3))) < 1e-10


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(ValueError):
        rotation_unitary(build_spin(1), [1.0, 1.0, 0.0], 0.3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 14), axes, st.floats(-20, 20))
def test_rotation_unitary_and_inverse(two_j, n, theta):
    s = build_spin(two_j)
    u = rotation_unitary(s, n, theta)
    assert is_unitary(u, 1e-10)
    assert np.max(np.abs(u @ rotation_unitary(s, n, -theta) - np.eye(s.dim))) < 1e-10


@settings(max_examples=60, deadline=None)
@given(axes, st.floats(-20, 20))
def test_spin_half_matches_rodrigues(n, theta):
    u = rotation_unitary(build_spin(1), n, theta)
    assert np.max(np.abs(u - su2_rodrigues(n, theta))) < 1e-12


@pytest.mark.parametrize("two_j", range(0, 8))
def test_two_pi_parity(two_j, rng):
    s = build_spin(two_j)
    u = rotation_unitary(s, random_unit(rng), 2 * np.pi)
    assert np.max(np.abs(u - (-1) ** two_j * np.eye(s.dim))) < 1e-10


def _assert_valid(rho):
    m = rho.mat
    assert np.max(np.abs(m - m.conj().T)) < 1e-10
    assert abs(np.trace(m) - 1) < 1e-12
    assert np.min(np.linalg.eigvalsh(m)) >= -1e-10


def test_maximally_mixed():
    assert np.array_equal(maximally_mixed(2).mat, np.diag([0.5, 0.5]))
    assert np.allclose(maximally_mixed(3).mat, np.eye(3) / 3, atol=0)
    for d in range(1, 17):
        rho = maximally_mixed(d)
        _assert_valid(rho)
        assert np.trace(rho.mat).real == pytest.approx(1.0, abs=1e-15)


def test_diagonal_state_examples():
    s = build_spin(1)
    assert np.array_equal(diagonal_state(s, [1, 0]).mat, np.diag([1.0, 0.0]))
    assert np.array_equal(diagonal_state(s, [0.5, 0.5]).mat, maximally_mixed(2).mat)
    rho = diagonal_state(build_spin(2), [0.5, 0.3, 0.2])
    assert np.array_equal(np.diag(rho.mat).real, [0.5, 0.3, 0.2])
    assert np.allclose(rho.eigenvalues(), [0.5, 0.3, 0.2], atol=1e-15)


def test_diagonal_state_errors():
    s = build_spin(1)
    with pytest.raises(ValueError):
        diagonal_state(s, [1.2, -0.2])
    with pytest.raises(ValueError):
        diagonal_state(s, [0.5, 0.4])
    with pytest.raises(ValueError):
        diagonal_state(s, [0.5, 0.3, 0.2])


def test_diagonal_state_along_axis(rng):
    s = build_spin(4)
    n = random_unit(rng)
    lam = [0.4, 0.3, 0.15, 0.1, 0.05]
    rho = diagonal_state(s, lam, n)
    _assert_valid(rho)
    assert np.allclose(rho.eigenvalues(), lam, atol=1e-12)
    nj = s.component(n)
    assert np.max(np.abs(nj @ rho.mat - rho.mat @ nj)) < 1e-12


def test_pure_state_examples():
    s = build_spin(1)
    assert np.allclose(pure_state_along(s, [0, 0, 1], 1).mat, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(pure_state_along(s, [1, 0, 0], 1).mat, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    with pytest.raises(ValueError):
        pure_state_along(s, [0, 0, 1], 3)
    with pytest.raises(ValueError):
        pure_state_along(build_spin(2), [0, 0, 1], 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10), axes, st.data())
def test_pure_state_eigen_residual(two_j, n, data):
    s = build_spin(two_j)
    two_m = data.draw(st.sampled_from(s.two_ms))
    rho = pure_state_along(s, n, two_m)
    _assert_valid(rho)
    assert np.linalg.matrix_rank(rho.mat, tol=1e-8) == 1
    assert np.max(np.abs(s.component(n) @ rho.mat - two_m / 2 * rho.mat)) < 1e-10


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix([[1, 1], [0, 0]])
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        maximally_mixed(0)
