"""
Quantum states, unitary operators and their first/second moments.

Pure states stay amplitude vectors (effective dimension n); density matrices
are purified through vec(sqrt(rho)) (effective dimension n^2). Promotion from
pure to mixed is explicit via `to_density`, because the two representations
give different I_k chain lengths.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from uur import matrix_core
from uur.errors import BlochOutOfBall, DimMismatch, NotDensity, NotNormalized, NotPSD, NotUnitary, UncertaintyError
from uur.logger import get_logger

logger = get_logger(__name__)

TOL = 1e-10

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def gellmann_matrices():
    """The eight 3x3 Gell-Mann matrices in conventional order lambda_1..lambda_8."""
    mats = []

    def sym(j, k):
        m = np.zeros((3, 3), dtype=np.complex128)
        m[j, k] = m[k, j] = 1
        return m

    def antisym(j, k):
        m = np.zeros((3, 3), dtype=np.complex128)
        m[j, k] = -1j
        m[k, j] = 1j
        return m

    mats.append(sym(0, 1))
    mats.append(antisym(0, 1))
    mats.append(np.diag([1, -1, 0]).astype(np.complex128))
    mats.append(sym(0, 2))
    mats.append(antisym(0, 2))
    mats.append(sym(1, 2))
    mats.append(antisym(1, 2))
    mats.append(np.diag([1, 1, -2]).astype(np.complex128) / math.sqrt(3))
    return mats


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size < 1 or not np.all(np.isfinite(amps)):
            raise UncertaintyError("pure state needs a finite, non-empty amplitude vector")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > TOL:
            raise NotNormalized(f"state norm is {norm:.12f}, expected 1")
        object.__setattr__(self, "amplitudes", matrix_core.freeze(amps))

    @property
    def dim(self):
        return self.amplitudes.size

    @property
    def effective_dim(self):
        return self.dim

    @classmethod
    def normalized(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        return cls(amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        rho = matrix_core.as_square(self.matrix, "rho")
        deviation = matrix_core.hermiticity_error(rho)
        if deviation > TOL:
            raise NotDensity(f"density matrix is not Hermitian (max deviation {deviation:.3e})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > TOL:
            raise NotDensity(f"density matrix trace is {trace.real:.12f}, expected 1")
        smallest = float(matrix_core.hermitian_eig(rho).eigenvalues[-1])
        if smallest < -TOL:
            raise NotPSD(f"density matrix has eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", matrix_core.freeze(0.5 * (rho + matrix_core.dagger(rho))))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def effective_dim(self):
        return self.dim**2


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class UnitaryOperator:
    matrix: np.ndarray

    def __post_init__(self):
        u = matrix_core.as_square(self.matrix, "U")
        error = float(np.linalg.norm(matrix_core.dagger(u) @ u - np.eye(u.shape[0])))
        if error > TOL:
            raise NotUnitary(f"U†U deviates from I by {error:.3e} (Frobenius)")
        object.__setattr__(self, "matrix", matrix_core.freeze(u))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def adjoint(self):
        return UnitaryOperator(matrix_core.dagger(self.matrix))

    def scaled(self, phase):
        """Multiply by a unit-modulus scalar, e.g. D = i * shift(5)."""
        return UnitaryOperator(complex(phase) * self.matrix)

    def __matmul__(self, other):
        return UnitaryOperator(self.matrix @ other.matrix)

    @classmethod
    def from_matrix(cls, m):
        return cls(np.asarray(m, dtype=np.complex128))

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d, dtype=np.complex128))

    @classmethod
    def diagonal(cls, angles):
        """diag(e^{i a_0}, ..., e^{i a_{d-1}}) for real angles a_j."""
        return cls(np.diag(np.exp(1j * np.asarray(angles, dtype=np.float64))))


def clock(d):
    """diag(1, w, ..., w^{d-1}) with w = exp(2 pi i / d)."""
    if d < 2:
        raise UncertaintyError(f"clock needs d >= 2, got {d}")
    return UnitaryOperator.diagonal(2.0 * math.pi * np.arange(d) / d)


def shift(d):
    """Cyclic shift |j> -> |j+1 mod d>, i.e. [[0, 1], [I_{d-1}, 0]]."""
    if d < 2:
        raise UncertaintyError(f"shift needs d >= 2, got {d}")
    return UnitaryOperator(np.roll(np.eye(d, dtype=np.complex128), 1, axis=0))


def pauli_exp(axis, angle):
    """exp(i * angle * sigma_axis) = cos(angle) I + i sin(angle) sigma_axis."""
    axis = axis.lower()
    if axis not in PAULI:
        raise UncertaintyError(f"unknown Pauli axis {axis!r}")
    return UnitaryOperator(math.cos(angle) * np.eye(2) + 1j * math.sin(angle) * PAULI[axis])


def rotation3(axis, angle):
    """Real 3x3 rotation about X, Y or Z with the sign convention of the Euler-angle examples."""
    c, s = math.cos(angle), math.sin(angle)
    matrices = {
        "Z": [[c, s, 0], [-s, c, 0], [0, 0, 1]],
        "Y": [[c, 0, s], [0, 1, 0], [-s, 0, c]],
        "X": [[1, 0, 0], [0, c, -s], [0, s, c]],
    }
    key = axis.upper()
    if key not in matrices:
        raise UncertaintyError(f"unknown rotation axis {axis!r}")
    return UnitaryOperator(np.array(matrices[key], dtype=np.complex128))


def bloch_qubit(r):
    """rho = (I + r . sigma) / 2 for a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=np.float64).reshape(-1)
    if r.size != 3:
        raise UncertaintyError(f"Bloch vector needs 3 components, got {r.size}")
    length = float(np.linalg.norm(r))
    if length > 1.0 + TOL:
        raise BlochOutOfBall(f"|r| = {length:.12f} exceeds 1")
    rho = 0.5 * (np.eye(2) + r[0] * PAULI["x"] + r[1] * PAULI["y"] + r[2] * PAULI["z"])
    return DensityMatrix(rho)


def gellmann_qutrit(n):
    """rho = (I + sqrt(3) n . lambda) / 3; NotPSD when n leaves the state space."""
    n = np.asarray(n, dtype=np.float64).reshape(-1)
    if n.size != 8:
        raise UncertaintyError(f"Gell-Mann vector needs 8 components, got {n.size}")
    rho = np.eye(3, dtype=np.complex128)
    for coeff, lam in zip(n, gellmann_matrices()):
        rho = rho + math.sqrt(3) * coeff * lam
    return DensityMatrix(rho / 3.0)


def to_density(state):
    """Explicit promotion |psi> -> |psi><psi|."""
    if isinstance(state, DensityMatrix):
        return state
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, np.conj(psi)))


def _check_dims(u, s):
    if u.dim != s.dim:
        raise DimMismatch(f"operator dim {u.dim} does not match state dim {s.dim}")


def expect_matrix(m, s):
    """<psi|M|psi> or Tr(rho M) for an arbitrary square matrix of matching size."""
    if isinstance(s, PureState):
        psi = s.amplitudes
        return complex(np.vdot(psi, m @ psi))
    return complex(np.trace(s.matrix @ m))


def expectation(u, s):
    _check_dims(u, s)
    return expect_matrix(u.matrix, s)


def deviation(u, s):
    """delta U = U - <U> I."""
    _check_dims(u, s)
    return u.matrix - expectation(u, s) * np.eye(u.dim)


def variance(u, s):
    """<dU† dU> for pure states, Tr(rho dU† dU) for mixed ones."""
    d = deviation(u, s)
    return float(expect_matrix(matrix_core.dagger(d) @ d, s).real)


def purify(rho):
    """|sqrt(rho)> = vec(sqrt(rho)), a unit vector of dimension n^2."""
    return PureState(matrix_core.vec(matrix_core.psd_sqrt(rho.matrix)))


def purified_expectation(u, rho, purified=None):
    """<sqrt(rho)| (I kron U) |sqrt(rho)>."""
    _check_dims(u, rho)
    purified = purified or purify(rho)
    v = purified.amplitudes
    return complex(np.vdot(v, matrix_core.kron(np.eye(rho.dim), u.matrix) @ v))


def purified_variance(u, rho, purified=None):
    """|(I kron dU)|sqrt(rho)>|^2, the vectorized variance path."""
    purified = purified or purify(rho)
    d = deviation(u, rho)
    return float(np.linalg.norm(matrix_core.kron(np.eye(rho.dim), d) @ purified.amplitudes) ** 2)
