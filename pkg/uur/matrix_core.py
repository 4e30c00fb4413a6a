"""
Dense complex matrix routines.

Small-dimension helpers (n <= 9 in every scenario) for the spectral work the
bounds need: Hermitian eigendecomposition by cyclic Jacobi rotations, the PSD
square root built on it, Kronecker products, column-stacking vectorization
and determinants.
"""

import math
from dataclasses import dataclass

import numpy as np

from uur.errors import NoConvergence, NotHermitian, NotPSD, NotSquare, TooLarge, UncertaintyError
from uur.logger import get_logger

logger = get_logger(__name__)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 100
DET_MAX_DIM = 8

# Column stacking: vec(M T) = (I kron M) vec(T) holds only in this order.
VEC_ORDER = "F"


def freeze(array):
    """Return a read-only copy of `array`."""
    frozen = np.array(array, copy=True)
    frozen.setflags(write=False)
    return frozen


def as_matrix(m, name="matrix"):
    """Validate and coerce `m` into a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise UncertaintyError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise UncertaintyError(f"{name} has non-finite entries")
    return arr


def as_square(m, name="matrix"):
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {arr.shape}")
    return arr


def dagger(m):
    return np.conj(np.asarray(m)).T


def hermiticity_error(m):
    """Max entrywise deviation of m from m†."""
    arr = np.asarray(m)
    return float(np.max(np.abs(arr - dagger(arr))))


def kron(a, b):
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def vec(m):
    """Column-stacking vectorization: entry m[i, j] lands at j * rows + i."""
    return np.reshape(as_matrix(m), -1, order=VEC_ORDER)


def unvec(v, rows, cols):
    """Inverse of vec for a rows x cols matrix."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.size != rows * cols:
        raise UncertaintyError(f"cannot unvec {arr.size} entries into {rows}x{cols}")
    return np.reshape(arr, (rows, cols), order=VEC_ORDER)


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues sorted descending with orthonormal eigenvector columns in matching order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", freeze(np.asarray(self.eigenvalues, dtype=np.float64)))
        object.__setattr__(self, "eigenvectors", freeze(np.asarray(self.eigenvectors, dtype=np.complex128)))

    def reconstruct(self):
        v = self.eigenvectors
        return v @ np.diag(self.eigenvalues) @ dagger(v)


def _off_diagonal_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a, v, p, q):
    """Apply one complex Jacobi rotation that annihilates a[p, q]."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase = apq / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    # diag(1, conj(phase)) makes the 2x2 block real symmetric, then a plane rotation
    rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ rot
    a[idx, :] = dagger(rot) @ a[idx, :]
    v[:, idx] = v[:, idx] @ rot


def hermitian_eig(h):
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Raises:
        NotHermitian: if max|h - h†| exceeds HERMITIAN_TOL
        NoConvergence: if the off-diagonal norm does not drop below the
            threshold within JACOBI_MAX_SWEEPS sweeps
    """
    h = as_square(h, "h")
    deviation = hermiticity_error(h)
    if deviation > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian (max deviation {deviation:.3e})")

    n = h.shape[0]
    a = 0.5 * (h + dagger(h))
    v = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_THRESHOLD * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_diagonal_norm(a) > threshold:
        if sweeps == JACOBI_MAX_SWEEPS:
            raise NoConvergence(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {_off_diagonal_norm(a):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
        sweeps += 1

    logger.debug(f"Jacobi converged: n={n}, sweeps={sweeps}")
    eigenvalues = np.real(np.diag(a))
    order = np.argsort(-eigenvalues, kind="stable")
    return HermitianEigen(eigenvalues=eigenvalues[order], eigenvectors=v[:, order])


def psd_sqrt(h):
    """
    Unique positive semidefinite square root of a Hermitian PSD matrix.

    Eigenvalues with |lambda| < PSD_TOL are set to zero; anything below -PSD_TOL
    raises NotPSD.
    """
    eig = hermitian_eig(h)
    smallest = float(eig.eigenvalues[-1])
    if smallest < -PSD_TOL:
        raise NotPSD(f"matrix has eigenvalue {smallest:.3e} below -{PSD_TOL:g}")

    eigenvalues = np.where(np.abs(eig.eigenvalues) < PSD_TOL, 0.0, eig.eigenvalues)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    v = eig.eigenvectors
    root = (v * roots) @ dagger(v)
    return 0.5 * (root + dagger(root))


def det(m):
    """Determinant via LU with partial pivoting (LAPACK getrf), n <= DET_MAX_DIM."""
    m = as_square(m, "m")
    if m.shape[0] > DET_MAX_DIM:
        raise TooLarge(f"det supports n <= {DET_MAX_DIM}, got n={m.shape[0]}")
    return complex(np.linalg.det(m))
