"""
Variance-product lower bounds for unitary operators.

For two unitaries A, B and a state, the deviation vectors dA|psi> (or
(I kron dA)|sqrt(rho)> for mixed states) give coordinate moduli x, y of
length N. The hierarchy

    I_1 = |x|^2 |y|^2 >= I_2 >= ... >= I_N = (sum x_i y_i)^2 >= LB2

applies the Cauchy-Schwarz step only on the leading k coordinates. Every
bound here is computed in the standard basis of the supplied matrices.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from uur import matrix_core
from uur import quantum_model as qm
from uur.errors import (
    DimMismatch,
    ExhaustiveTooLarge,
    IndexOutOfRange,
    InvalidPairSet,
    InvalidPermutation,
    NumericalInconsistency,
    TooManyOperators,
)
from uur.logger import get_logger

logger = get_logger(__name__)

EXHAUSTIVE_MAX_N = 6
TIE_TOL = 1e-12
DET_IMAG_TOL = 1e-9
MAX_GRAM_OPERATORS = 4
SWAP_PASSES = 20


@dataclass(frozen=True)
class AmplitudePair:
    alpha: np.ndarray
    beta: np.ndarray
    x: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.complex128).reshape(-1)
        beta = np.asarray(self.beta, dtype=np.complex128).reshape(-1)
        if alpha.size != beta.size:
            raise DimMismatch(f"alpha has {alpha.size} coordinates, beta has {beta.size}")
        object.__setattr__(self, "alpha", matrix_core.freeze(alpha))
        object.__setattr__(self, "beta", matrix_core.freeze(beta))
        object.__setattr__(self, "x", matrix_core.freeze(np.abs(alpha)))
        object.__setattr__(self, "y", matrix_core.freeze(np.abs(beta)))

    @property
    def n_eff(self):
        return self.alpha.size

    @classmethod
    def from_moduli(cls, x, y):
        """Pair with real non-negative coordinates, for work directly on X and Y."""
        return cls(np.abs(np.asarray(x, dtype=np.float64)), np.abs(np.asarray(y, dtype=np.float64)))


@dataclass(frozen=True)
class BoundChain:
    values: np.ndarray
    lb_gram2: float

    def __post_init__(self):
        object.__setattr__(self, "values", matrix_core.freeze(np.asarray(self.values, dtype=np.float64)))

    def __getitem__(self, k):
        """1-based access: chain[k] is I_k."""
        if not 1 <= k <= self.values.size:
            raise IndexOutOfRange(f"k={k} outside 1..{self.values.size}")
        return float(self.values[k - 1])

    def is_nonincreasing(self, slack=1e-10):
        return bool(np.all(np.diff(self.values) <= slack))


@dataclass(frozen=True)
class PermutationPair:
    """pi1[i] (pi2[i]) is the source index placed at position i of x (y); 0-based."""

    pi1: tuple
    pi2: tuple

    def __post_init__(self):
        pi1, pi2 = tuple(int(i) for i in self.pi1), tuple(int(i) for i in self.pi2)
        if len(pi1) != len(pi2):
            raise InvalidPermutation(f"permutation lengths differ: {len(pi1)} vs {len(pi2)}")
        for name, perm in (("pi1", pi1), ("pi2", pi2)):
            if sorted(perm) != list(range(len(perm))):
                raise InvalidPermutation(f"{name}={perm} is not a permutation of 0..{len(perm) - 1}")
        object.__setattr__(self, "pi1", pi1)
        object.__setattr__(self, "pi2", pi2)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), tuple(range(n)))


@dataclass(frozen=True)
class GramReport:
    gram: np.ndarray
    determinant: float
    lb2: Optional[float] = None
    lb3: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "gram", matrix_core.freeze(self.gram))


# --- amplitude vectors -------------------------------------------------------


def _check_uniform(ops, s):
    for u in ops:
        if u.dim != s.dim:
            raise DimMismatch(f"operator dim {u.dim} does not match state dim {s.dim}")


def deviation_vectors(ops, s):
    """dU|psi> per operator, or (I kron dU)|sqrt(rho)> with one shared purification."""
    _check_uniform(ops, s)
    if isinstance(s, qm.PureState):
        return [qm.deviation(u, s) @ s.amplitudes for u in ops]
    root = matrix_core.psd_sqrt(s.matrix)
    # (I kron dU) vec(sqrt rho) = vec(dU sqrt rho)
    return [matrix_core.vec(qm.deviation(u, s) @ root) for u in ops]


def amplitude_pair(a, b, s):
    alpha, beta = deviation_vectors([a, b], s)
    return AmplitudePair(alpha, beta)


# --- the I_k hierarchy -------------------------------------------------------


def _check_k(k, n):
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"k={k} outside 1..{n}")


def _i_k_batch(x, y, k):
    """
    I_k for row-stacked moduli, shape (..., N).

    Written as (sum_{i<=k} x_i y_i)^2 + X_tail |Y|^2 + X_head Y_tail, which is
    the dots-outside-the-principal-square form with no cancellation.
    """
    x2, y2 = x * x, y * y
    head_xy = np.sum(x[..., :k] * y[..., :k], axis=-1)
    x_head = np.sum(x2[..., :k], axis=-1)
    x_tail = np.sum(x2[..., k:], axis=-1)
    y_tail = np.sum(y2[..., k:], axis=-1)
    y_all = np.sum(y2, axis=-1)
    return head_xy**2 + x_tail * y_all + x_head * y_tail


def i_k(p, k):
    _check_k(k, p.n_eff)
    return float(_i_k_batch(p.x, p.y, k))


def i_k_decomposed(p, k):
    """I_k summed as the figure-style decomposition: head square + off-square cross terms + tail diagonal."""
    _check_k(k, p.n_eff)
    x, y, n = p.x, p.y, p.n_eff
    head = float(np.dot(x[:k], y[:k])) ** 2
    cross = sum(x[i] ** 2 * y[j] ** 2 + x[j] ** 2 * y[i] ** 2 for j in range(k, n) for i in range(j))
    tail = float(np.sum(x[k:] ** 2 * y[k:] ** 2))
    return head + cross + tail


def chain_difference(p, k):
    """I_{k+1} - I_k = -sum_{i<=k} (x_i y_{k+1} - x_{k+1} y_i)^2, for 1 <= k < N."""
    _check_k(k + 1, p.n_eff)
    x, y = p.x, p.y
    return -float(np.sum((x[:k] * y[k] - x[k] * y[:k]) ** 2))


def chain(p):
    """Full chain I_1..I_N with the Gram endpoint |<alpha, beta>|^2 attached."""
    values = [i_k(p, k) for k in range(1, p.n_eff + 1)]
    lb_gram2 = abs(complex(np.vdot(p.alpha, p.beta))) ** 2
    return BoundChain(values=np.array(values), lb_gram2=lb_gram2)


def covariance(a, b, s):
    """<A†B> - <A†><B>."""
    _check_uniform([a, b], s)
    return qm.expect_matrix(matrix_core.dagger(a.matrix) @ b.matrix, s) - qm.expect_matrix(
        matrix_core.dagger(a.matrix), s
    ) * qm.expectation(b, s)


def lb2(a, b, s):
    return abs(covariance(a, b, s)) ** 2


# --- permutation strengthening -----------------------------------------------


def permuted_i_k(p, perm, k):
    """I_k on the relabelled pair x'_i = x[pi1[i]], y'_i = y[pi2[i]]."""
    _check_k(k, p.n_eff)
    if len(perm.pi1) != p.n_eff:
        raise InvalidPermutation(f"permutation of length {len(perm.pi1)} for N={p.n_eff}")
    return float(_i_k_batch(p.x[list(perm.pi1)], p.y[list(perm.pi2)], k))


def _first_within_tie(values, tol=TIE_TOL):
    """Index of the first entry within `tol` of the maximum."""
    best = float(np.max(values))
    return int(np.argmax(values >= best - tol)), best


def _exhaustive(x, y, k):
    n = x.size
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    x_rows, y_rows = x[perms], y[perms]
    # rows of `values` follow pi1 in lexicographic order, columns pi2
    values = np.empty((len(perms), len(perms)))
    for i, xr in enumerate(x_rows):
        values[i] = _i_k_batch(np.broadcast_to(xr, y_rows.shape), y_rows, k)
    flat_index, _ = _first_within_tie(values.reshape(-1))
    i1, i2 = divmod(flat_index, len(perms))
    return float(values[i1, i2]), PermutationPair(tuple(perms[i1]), tuple(perms[i2]))


def _swap_refine(x, y, k, pi1, pi2, value):
    """Pairwise-swap hill climbing on both relabellings until no swap improves."""
    n = x.size
    for _ in range(SWAP_PASSES):
        improved = False
        for perm in (pi1, pi2):
            for i, j in itertools.combinations(range(n), 2):
                perm[i], perm[j] = perm[j], perm[i]
                candidate = float(_i_k_batch(x[pi1], y[pi2], k))
                if candidate > value + TIE_TOL:
                    value, improved = candidate, True
                else:
                    perm[i], perm[j] = perm[j], perm[i]
        if not improved:
            break
    return value, pi1, pi2


def _heuristic(x, y, k, seed, restarts):
    n = x.size
    identity = np.arange(n)
    desc_x, desc_y = np.argsort(-x, kind="stable"), np.argsort(-y, kind="stable")
    asc_x, asc_y = desc_x[::-1], desc_y[::-1]
    candidates = [(identity, identity), (desc_x, desc_y), (asc_x, asc_y)]

    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(restarts):
        candidates.append((rng.permutation(n), rng.permutation(n)))

    pi1s = np.array([c[0] for c in candidates])
    pi2s = np.array([c[1] for c in candidates])
    values = _i_k_batch(x[pi1s], y[pi2s], k)
    index, _ = _first_within_tie(values)
    value, pi1, pi2 = _swap_refine(x, y, k, list(pi1s[index]), list(pi2s[index]), float(values[index]))
    return value, PermutationPair(tuple(pi1), tuple(pi2))


def max_permuted_i_k(p, k, strategy="auto", seed=0, restarts=1000):
    """
    Maximise I_k over independent relabellings of x and y.

    strategy="exhaustive" searches all of S_N x S_N (N <= EXHAUSTIVE_MAX_N) and
    returns the lexicographically smallest maximising pair; "heuristic" tries
    sorted pairings plus `restarts` seeded random pairs and refines the best by
    swaps, giving a valid bound >= I_k; "auto" picks by N.
    """
    _check_k(k, p.n_eff)
    n = p.n_eff
    if strategy == "auto":
        strategy = "exhaustive" if n <= EXHAUSTIVE_MAX_N else "heuristic"

    if k == 1:
        return i_k(p, 1), PermutationPair.identity(n)

    if strategy == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ExhaustiveTooLarge(f"exhaustive search limited to N <= {EXHAUSTIVE_MAX_N}, got N={n}")
        logger.debug(f"Exhaustive permutation search: N={n}, k={k}, pairs={math.factorial(n) ** 2}")
        return _exhaustive(p.x, p.y, k)
    if strategy == "heuristic":
        logger.debug(f"Heuristic permutation search: N={n}, k={k}, restarts={restarts}, seed={seed}")
        return _heuristic(p.x, p.y, k, seed, restarts)
    raise ValueError(f"unknown strategy {strategy!r}")


# --- arbitrary pair sets -----------------------------------------------------


def pairset_bound(p, pairs):
    """
    I_1 with the cross terms of each selected (i, j), i < j (0-based), replaced
    by 2 x_i y_i x_j y_j. The block {(i, j): i < j < k} gives I_k.
    """
    n = p.n_eff
    seen = set()
    for pair in pairs:
        i, j = (int(v) for v in pair)
        if not 0 <= i < j < n:
            raise InvalidPairSet(f"pair {(i, j)} is not an index pair i < j within 0..{n - 1}")
        if (i, j) in seen:
            raise InvalidPairSet(f"duplicate pair {(i, j)}")
        seen.add((i, j))

    x, y = p.x, p.y
    value = float(np.sum(x**2) * np.sum(y**2))
    for i, j in seen:
        value -= (x[i] * y[j] - x[j] * y[i]) ** 2
    return value


# --- Gram matrix bounds ------------------------------------------------------


def gram(ops, s):
    """Gram matrix G_jk = <U_j† U_k> over {I, U_1, .., U_d} and its determinant."""
    ops = list(ops)
    if not 1 <= len(ops) <= MAX_GRAM_OPERATORS:
        raise TooManyOperators(f"gram supports 1..{MAX_GRAM_OPERATORS} operators, got {len(ops)}")
    _check_uniform(ops, s)

    mats = [np.eye(s.dim, dtype=np.complex128)] + [u.matrix for u in ops]
    size = len(mats)
    g = np.empty((size, size), dtype=np.complex128)
    for j in range(size):
        for k in range(size):
            g[j, k] = 1.0 if j == k else qm.expect_matrix(matrix_core.dagger(mats[j]) @ mats[k], s)

    determinant = matrix_core.det(g)
    if abs(determinant.imag) > DET_IMAG_TOL:
        raise NumericalInconsistency(f"Gram determinant has imaginary part {determinant.imag:.3e}")
    if determinant.real < -DET_IMAG_TOL:
        raise NumericalInconsistency(f"Gram determinant is negative ({determinant.real:.3e})")

    report = {"lb2": None, "lb3": None}
    if len(ops) == 2:
        report["lb2"] = lb2(*ops, s)
    elif len(ops) == 3:
        report["lb3"] = lb3(*ops, s)
    return GramReport(gram=g, determinant=float(determinant.real), **report)


def lb3(a, b, c, s):
    """Three-operator Gram bound: det G >= 0 rewritten against dA^2 dB^2 dC^2."""
    s_ab, s_ac, s_bc = covariance(a, b, s), covariance(a, c, s), covariance(b, c, s)
    s_cb, s_ba = covariance(c, b, s), covariance(b, a, s)
    va, vb, vc = qm.variance(a, s), qm.variance(b, s), qm.variance(c, s)
    return va * abs(s_bc) ** 2 + vb * abs(s_ac) ** 2 + vc * abs(s_ab) ** 2 - 2.0 * (s_ac * s_cb * s_ba).real


# --- multi-operator products -------------------------------------------------


def pair_factor(p, k, strengthened=False, seed=0, restarts=1000):
    """I_k of a pair, or its permutation maximum when strengthened."""
    if strengthened:
        return max_permuted_i_k(p, k, seed=seed, restarts=restarts)[0]
    return i_k(p, k)


def product3_from_vectors(va, vb, vc, k, strengthened=False, seed=0, restarts=1000):
    factors = [
        pair_factor(AmplitudePair(u, v), k, strengthened, seed, restarts)
        for u, v in ((va, vb), (va, vc), (vb, vc))
    ]
    return math.sqrt(max(factors[0] * factors[1] * factors[2], 0.0))


def product3_bound(a, b, c, s, k, strengthened=False, seed=0, restarts=1000):
    """sqrt(I_k J_k K_k) over the pairs (A,B), (A,C), (B,C); hatted maxima when strengthened."""
    _check_k(k, s.effective_dim)
    if k < 2:
        raise IndexOutOfRange(f"product bounds need k >= 2, got {k}")
    va, vb, vc = deviation_vectors([a, b, c], s)
    return product3_from_vectors(va, vb, vc, k, strengthened, seed, restarts)


MATCHINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def product4_from_vectors(vectors, k, best_matching=False):
    matchings = MATCHINGS if best_matching else MATCHINGS[:1]
    values = []
    for (i, j), (m, n) in matchings:
        first = i_k(AmplitudePair(vectors[i], vectors[j]), k)
        second = i_k(AmplitudePair(vectors[m], vectors[n]), k)
        values.append(first * second)
    return max(values)


def product4_bound(pairing, s, k, best_matching=False):
    """I_k(a, b) J_k(c, d) for pairing ((a, b), (c, d)); max over all three matchings when best_matching."""
    (a, b), (c, d) = pairing
    _check_k(k, s.effective_dim)
    if k < 2:
        raise IndexOutOfRange(f"product bounds need k >= 2, got {k}")
    return product4_from_vectors(deviation_vectors([a, b, c, d], s), k, best_matching)
