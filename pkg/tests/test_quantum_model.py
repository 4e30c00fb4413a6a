import math
import os
import sys

import numpy as np
import pytest

# Fix imports
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from uur import quantum_model as qm  # noqa: E402
from uur.errors import (  # noqa: E402
    BlochOutOfBall,
    DimMismatch,
    NotDensity,
    NotNormalized,
    NotPSD,
    NotUnitary,
)


def test_pure_state_requires_unit_norm():
    with pytest.raises(NotNormalized):
        qm.PureState([1.0, 1.0])


def test_normalized_constructor():
    state = qm.PureState.normalized([3.0, 4.0])

    np.testing.assert_allclose(state.amplitudes, [0.6, 0.8])
    assert state.effective_dim == 2


def test_density_matrix_checks():
    with pytest.raises(NotDensity):
        qm.DensityMatrix(np.eye(2))
    with pytest.raises(NotDensity):
        qm.DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(NotPSD):
        qm.DensityMatrix(np.diag([1.5, -0.5]))


def test_density_effective_dim_is_squared():
    assert qm.DensityMatrix(np.eye(3) / 3).effective_dim == 9


def test_unitary_validation():
    with pytest.raises(NotUnitary):
        qm.UnitaryOperator(np.array([[1, 1], [0, 1]]))


def test_clock_and_shift_weyl_relation():
    """A B = w B A for the d-dimensional clock and shift."""
    for d in (2, 3, 4, 5):
        a, b = qm.clock(d), qm.shift(d)
        omega = np.exp(2j * math.pi / d)

        np.testing.assert_allclose(a.matrix @ b.matrix, omega * b.matrix @ a.matrix, atol=1e-12)


def test_shift_layout():
    """shift(3) = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]."""
    expected = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])

    np.testing.assert_array_equal(qm.shift(3).matrix, expected)


def test_clock_d2_is_sigma_z():
    np.testing.assert_allclose(qm.clock(2).matrix, np.diag([1, -1]), atol=1e-15)


def test_pauli_exp_y_is_real_rotation():
    u = qm.pauli_exp("y", math.pi / 8)
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)

    np.testing.assert_allclose(u.matrix, [[c, s], [-s, c]], atol=1e-15)


def test_pauli_exp_z_phases():
    u = qm.pauli_exp("z", math.pi / 8)

    np.testing.assert_allclose(np.diag(u.matrix), [np.exp(1j * math.pi / 8), np.exp(-1j * math.pi / 8)])


def test_rotation3_z():
    u = qm.rotation3("Z", math.pi / 2)

    np.testing.assert_allclose(u.matrix, [[0, 1, 0], [-1, 0, 0], [0, 0, 1]], atol=1e-15)


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_pauli_exp_at_zero_is_identity(axis):
    np.testing.assert_allclose(qm.pauli_exp(axis, 0.0).matrix, np.eye(2), atol=1e-15)


def test_rotation3_z_quarter_turn():
    h = math.sqrt(2) / 2

    np.testing.assert_allclose(qm.rotation3("Z", math.pi / 4).matrix, [[h, h, 0], [-h, h, 0], [0, 0, 1]], atol=1e-15)


def test_rotation3_identity_and_inverse():
    np.testing.assert_allclose(qm.rotation3("X", 0.0).matrix, np.eye(3), atol=1e-15)

    product = qm.rotation3("Y", -math.pi / 4).matrix @ qm.rotation3("Y", math.pi / 4).matrix
    np.testing.assert_allclose(product, np.eye(3), atol=1e-12)


def test_shift_power_d_is_identity():
    for d in range(2, 7):
        np.testing.assert_allclose(np.linalg.matrix_power(qm.shift(d).matrix, d), np.eye(d), atol=1e-12)


def test_scaled_and_diagonal_operators():
    u = qm.shift(5).scaled(1j)

    np.testing.assert_allclose(u.matrix, 1j * qm.shift(5).matrix)
    np.testing.assert_allclose(np.diag(qm.UnitaryOperator.diagonal([0, math.pi]).matrix), [1, -1], atol=1e-15)


def test_bloch_qubit():
    rho = qm.bloch_qubit([0.0, 0.0, 1.0])

    np.testing.assert_allclose(rho.matrix, np.diag([1, 0]), atol=1e-15)
    with pytest.raises(BlochOutOfBall):
        qm.bloch_qubit([1.0, 1.0, 0.0])


def test_gellmann_qutrit_matches_explicit_matrix():
    theta = 0.7
    n = np.zeros(8)
    n[0], n[5] = math.cos(theta) / math.sqrt(3), math.sin(theta) / math.sqrt(3)

    rho = qm.gellmann_qutrit(n)

    c, s = math.cos(theta), math.sin(theta)
    expected = np.array([[1, c, 0], [c, 1, s], [0, s, 1]]) / 3
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-12)


def test_gellmann_qutrit_outside_state_space():
    with pytest.raises(NotPSD):
        qm.gellmann_qutrit([1, 0, 0, 0, 0, 0, 0, 0])


def test_gellmann_matrices_are_traceless_hermitian():
    mats = qm.gellmann_matrices()

    assert len(mats) == 8
    for lam in mats:
        assert abs(np.trace(lam)) < 1e-15
        np.testing.assert_allclose(lam, lam.conj().T)
        assert np.trace(lam @ lam).real == pytest.approx(2.0)


def test_variance_of_unitary_identity():
    """dA^2 = 1 - |<A>|^2 for a unitary A."""
    psi = qm.PureState.normalized([1.0, 1j, 0.5])
    a = qm.clock(3)

    var = qm.variance(a, psi)

    assert var == pytest.approx(1.0 - abs(qm.expectation(a, psi)) ** 2, abs=1e-12)
    assert 0.0 <= var <= 1.0


def test_clock_expectation_on_two_term_state():
    """<clock(3)> on cos|0> - sin|2> is cos^2 + e^{4 pi i / 3} sin^2."""
    for theta in (0.0, 0.4, math.pi / 3, 2.0):
        psi = qm.PureState([math.cos(theta), 0.0, -math.sin(theta)])
        expected = math.cos(theta) ** 2 + np.exp(4j * math.pi / 3) * math.sin(theta) ** 2

        assert qm.expectation(qm.clock(3), psi) == pytest.approx(expected, abs=1e-12)


def test_variance_zero_on_eigenstate():
    psi = qm.PureState([0.0, 1.0])

    assert qm.variance(qm.clock(2), psi) == pytest.approx(0.0, abs=1e-15)


def test_mixed_variance_paths_agree():
    rho = qm.bloch_qubit([1 / 3, 0.4, -0.2])
    u = qm.pauli_exp("x", 0.3)

    assert qm.purified_variance(u, rho) == pytest.approx(qm.variance(u, rho), abs=1e-12)
    assert qm.purified_expectation(u, rho) == pytest.approx(qm.expectation(u, rho), abs=1e-12)


@pytest.mark.parametrize("r", [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, -0.5, 0.0]])
def test_purify_bloch_states_with_equal_diagonal(r):
    """Equal diagonal entries used to stall the eigensolver."""
    rho = qm.bloch_qubit(r)
    u = qm.pauli_exp("z", 0.3)

    purified = qm.purify(rho)

    root = purified.amplitudes.reshape(2, 2, order="F")
    np.testing.assert_allclose(root @ root, rho.matrix, atol=1e-12)
    assert qm.purified_variance(u, rho, purified) == pytest.approx(qm.variance(u, rho), abs=1e-12)


def test_purify_is_unit_vector_of_squared_dim():
    rho = qm.DensityMatrix(np.diag([0.5, 0.3, 0.2]))

    purified = qm.purify(rho)

    assert purified.dim == 9
    assert np.linalg.norm(purified.amplitudes) == pytest.approx(1.0)


def test_to_density_promotion():
    psi = qm.PureState.normalized([1.0, 1.0])

    rho = qm.to_density(psi)

    np.testing.assert_allclose(rho.matrix, np.full((2, 2), 0.5))
    assert qm.variance(qm.clock(2), rho) == pytest.approx(qm.variance(qm.clock(2), psi))


def test_dimension_mismatch():
    with pytest.raises(DimMismatch):
        qm.expectation(qm.clock(3), qm.PureState([1.0, 0.0]))
