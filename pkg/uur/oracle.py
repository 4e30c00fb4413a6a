"""
Brute-force reference implementations and seeded instance generators.

Nothing here reuses the closed forms in uur.bounds: I_k is the literal three
loop sum, the permutation maximum walks all of S_N x S_N one pair at a time,
determinants use cofactor expansion and variances are explicit matrix
products. Random numbers come from numpy's PCG64 bit generator, so a seed
reproduces the same instance stream on every platform.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from uur import quantum_model as qm
from uur.bounds import PermutationPair
from uur.errors import TooLarge, UncertaintyError

ORACLE_PERM_MAX_N = 6
LAPLACE_MAX_N = 5
TIE_TOL = 1e-12


@dataclass(frozen=True)
class Seed:
    value: int

    def __post_init__(self):
        if not 0 <= int(self.value) < 2**64:
            raise UncertaintyError(f"seed must be a 64-bit unsigned integer, got {self.value}")
        object.__setattr__(self, "value", int(self.value))

    def rng(self):
        return np.random.Generator(np.random.PCG64(self.value))

    def child(self, index):
        """Independent seed for the index-th instance of a suite."""
        state = np.random.SeedSequence([self.value, int(index)]).generate_state(1, dtype=np.uint64)
        return Seed(int(state[0]))

    def stream(self, count):
        return [self.child(i) for i in range(count)]


def i_k_reference(x, y, k):
    """I_k summed term by term: diagonal, pairs with j > k, and the 2 x_i y_j x_j y_i block (1-based k)."""
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if len(x) != len(y):
        raise UncertaintyError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if not 1 <= k <= n:
        raise UncertaintyError(f"k={k} outside 1..{n}")

    total = 0.0
    for i in range(n):
        total += x[i] ** 2 * y[i] ** 2
    for j in range(n):
        for i in range(j):
            if j + 1 > k:
                total += x[i] ** 2 * y[j] ** 2 + x[j] ** 2 * y[i] ** 2
    for j in range(k):
        for i in range(j):
            total += 2.0 * x[i] * y[j] * x[j] * y[i]
    return total


def exhaustive_perm_max(x, y, k):
    """Max of I_k over every (pi1, pi2); first pair (lexicographic) within TIE_TOL of the max."""
    n = len(x)
    if n > ORACLE_PERM_MAX_N:
        raise TooLarge(f"oracle permutation search limited to N <= {ORACLE_PERM_MAX_N}, got N={n}")

    perms = list(itertools.permutations(range(n)))
    scored = []
    for pi1 in perms:
        xs = [x[i] for i in pi1]
        for pi2 in perms:
            scored.append((i_k_reference(xs, [y[i] for i in pi2], k), pi1, pi2))

    best = max(value for value, _, _ in scored)
    for value, pi1, pi2 in scored:
        if value >= best - TIE_TOL:
            return value, PermutationPair(pi1, pi2)


def laplace_det(m):
    """Determinant by cofactor expansion along the first row, n <= 5."""
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise UncertaintyError(f"laplace_det needs a square matrix, got shape {m.shape}")
    if n > LAPLACE_MAX_N:
        raise TooLarge(f"laplace_det supports n <= {LAPLACE_MAX_N}, got n={n}")
    if n == 1:
        return complex(m[0, 0])

    total = 0j
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * laplace_det(minor)
    return total


def variance_reference(u, s):
    """Tr(rho dU† dU) by explicit products; pure states are turned into |psi><psi| first."""
    if isinstance(s, qm.PureState):
        rho = np.outer(s.amplitudes, np.conj(s.amplitudes))
    else:
        rho = np.array(s.matrix)
    mean = np.trace(rho @ u.matrix)
    d = u.matrix - mean * np.eye(u.dim)
    return float(np.trace(rho @ np.conj(d).T @ d).real)


def random_unitary(rng, dim):
    """Haar unitary from QR of a complex Gaussian matrix, with the R-diagonal phases removed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return qm.UnitaryOperator(q * np.conj(phases))


def random_state(rng, dim, mixed):
    if not mixed:
        return qm.PureState.normalized(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = np.conj(g).T @ g
    return qm.DensityMatrix(rho / np.trace(rho).real)


def random_instance(seed, dim, mixed, n_ops=2):
    """(state, U_1, .., U_{n_ops}), deterministic per seed."""
    if not 2 <= dim <= 6:
        raise UncertaintyError(f"random instances use 2 <= dim <= 6, got {dim}")
    rng = seed.rng()
    state = random_state(rng, dim, mixed)
    return (state, *(random_unitary(rng, dim) for _ in range(n_ops)))


def random_moduli(seed, n):
    """Non-negative coordinate vectors (x, y) of length n, with occasional exact zeros."""
    rng = seed.rng()
    x, y = rng.random(n), rng.random(n)
    x[rng.random(n) < 0.15] = 0.0
    y[rng.random(n) < 0.15] = 0.0
    return x, y
