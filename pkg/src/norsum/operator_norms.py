"""The upper-triangular multiplier matrix, its spectral norm, and norm bounds.

The matrix realizing the Norlund multiplier action has first row
(c_1, c_2-c_1, c_3-c_2, ...) with c_k = (P_{n-k}/P_n)**alpha for k <= n and
c_k = 0 beyond; row i repeats the difference pattern from the diagonal on.
Columns past index n+1 of the infinite matrix vanish identically
(consecutive c's are equal there), so the (n+1)x(n+1) realization is exact,
not an approximation.

Spectral norms are computed by power iteration on the Gram matrix.  Each
row differs from the next by c_i on two entries, which collapses both
matrix-vector products to O(n) prefix/suffix sums; dense SVD stays
available as the cross-checking oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundInapplicable, ConvergenceFailure
from .sequences import DeterminingSequence, growth_rate, is_non_decreasing

POWER_ITERATION_CAP = 100_000
RAYLEIGH_REL_CHANGE = 1e-12
RAYLEIGH_SPAN = 10


@dataclass(frozen=True)
class NorlundMatrix:
    """Finite (n+1)x(n+1) realization of the multiplier matrix.

    `c` holds c_1..c_{n+1} (the trailing entry is the structural zero).
    For a non-decreasing sequence the c_k are non-increasing, so every
    off-diagonal entry is <= 0.
    """

    n: int
    alpha: float
    entries: np.ndarray
    c: np.ndarray


def _c_vector(seq: DeterminingSequence, n: int, alpha: float) -> np.ndarray:
    """c_1..c_{n+1}; powers are taken on the ratio to avoid overflow."""
    P = seq.partial_sums(n)
    ratios = P[n - 1::-1] / P[n]        # P_{n-1}/P_n, ..., P_0/P_n
    c = np.exp(alpha * np.log(ratios))
    return np.concatenate([c, [0.0]])


def build_matrix(seq: DeterminingSequence, n: int, alpha: float) -> NorlundMatrix:
    """Dense realization for order n >= 1."""
    if n < 1:
        raise ValueError("matrix order must be >= 1")
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    c = _c_vector(seq, n, alpha)
    size = n + 1
    d = np.empty(size)
    d[0] = 0.0
    d[1:] = c[1:] - c[:-1]
    entries = np.triu(np.broadcast_to(d, (size, size)).copy(), k=1)
    np.fill_diagonal(entries, c)
    entries.flags.writeable = False
    c.flags.writeable = False
    return NorlundMatrix(n=n, alpha=float(alpha), entries=entries, c=c)


def _structured_matvecs(c: np.ndarray):
    """O(n) products with the matrix defined by c and with its transpose."""
    d = np.empty_like(c)
    d[0] = 0.0
    d[1:] = c[1:] - c[:-1]

    def mv(x: np.ndarray) -> np.ndarray:
        s = d * x
        tail = np.empty_like(s)
        tail[-1] = 0.0
        tail[:-1] = np.cumsum(s[::-1])[-2::-1]
        return c * x + tail

    def rmv(y: np.ndarray) -> np.ndarray:
        pref = np.empty_like(y)
        pref[0] = 0.0
        pref[1:] = np.cumsum(y)[:-1]
        return c * y + d * pref

    return mv, rmv


def _gram_power_iteration(mv, rmv, dim: int, seed: int) -> float:
    """Largest singular value via power iteration on A^T A.

    The Rayleigh quotient of the Gram iteration is non-decreasing, so it is
    taken as converged once its relative change over RAYLEIGH_SPAN
    iterations drops below RAYLEIGH_REL_CHANGE.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim)
    x /= np.linalg.norm(x)
    history: list[float] = []
    for _ in range(POWER_ITERATION_CAP):
        y = mv(x)
        lam = float(y @ y)
        if lam == 0.0:
            return 0.0
        w = rmv(y)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return float(np.sqrt(lam))
        x = w / nw
        history.append(lam)
        if len(history) > RAYLEIGH_SPAN:
            if abs(history[-1] - history[-1 - RAYLEIGH_SPAN]) <= RAYLEIGH_REL_CHANGE * abs(history[-1]):
                return float(np.sqrt(lam))
    raise ConvergenceFailure(
        f"Rayleigh quotient did not settle within {POWER_ITERATION_CAP} iterations")


def spectral_norm(matrix, method: str = "power", seed: int = 0) -> float:
    """Largest singular value of a NorlundMatrix or a dense array.

    method="power" runs the Gram power iteration (O(n) per step for a
    NorlundMatrix); method="svd" computes the full SVD and serves as the
    independent oracle in the tests.
    """
    if method == "svd":
        A = matrix.entries if isinstance(matrix, NorlundMatrix) else np.asarray(matrix, dtype=float)
        if A.size == 0:
            return 0.0
        return float(np.linalg.svd(A, compute_uv=False)[0])
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    if isinstance(matrix, NorlundMatrix):
        mv, rmv = _structured_matvecs(matrix.c)
        dim = len(matrix.c)
    else:
        A = np.asarray(matrix, dtype=float)
        mv = lambda x: A @ x
        rmv = lambda y: A.T @ y
        dim = A.shape[1]
    return _gram_power_iteration(mv, rmv, dim, seed)


def _spectral_norm_from_c(c: np.ndarray, seed: int = 0) -> float:
    mv, rmv = _structured_matvecs(c)
    return _gram_power_iteration(mv, rmv, len(c), seed)


def lemma_bound_upper(seq: DeterminingSequence, n: int, alpha: float) -> float:
    """(n+1) * sum of squared consecutive multiplier differences.

    Upper bound for the squared spectral norm; the k = n term uses the
    P_{-1} = 0 convention.
    """
    if n < 1:
        raise ValueError("bound is defined for n >= 1")
    c = _c_vector(seq, n, alpha)
    return (n + 1) * float(np.sum((c[:-1] - c[1:]) ** 2))


def _require_bound_hypotheses(seq: DeterminingSequence, n: int, alpha: float) -> None:
    if not alpha > 0.5:
        raise BoundInapplicable("closed-form bounds require alpha > 1/2")
    if not is_non_decreasing(seq, n):
        raise BoundInapplicable("closed-form bounds require a non-decreasing sequence")


def thm_upper_bound(seq: DeterminingSequence, n: int, alpha: float) -> float:
    """Case-split closed-form upper bound for the squared spectral norm.

    Valid as a finite-n bound for alpha >= 1.  For 1/2 < alpha < 1 it is an
    asymptotic envelope only: the true squared norm exceeds it at small n
    (see the pinned counterexample in the tests), so callers comparing it
    against exact norms at small n must expect violations.
    """
    if n < 1:
        raise ValueError("bound is defined for n >= 1")
    _require_bound_hypotheses(seq, n, alpha)
    rho = growth_rate(seq, n)
    if alpha >= 1.0:
        return alpha ** 2 * (n + 1) / n * rho ** (2 * alpha)
    return (alpha ** 2 / (2 * alpha - 1)) * (n + 1) * (n ** (2 * alpha - 1) + 2 * alpha - 2) \
        / n ** (2 * alpha) * rho ** (2 * alpha)


def thm_lower_bound(seq: DeterminingSequence, n: int, m: int, alpha: float) -> float:
    """Case-split submatrix lower bound for the squared spectral norm.

    Callers typically evaluate it at (2n, m=n) against the norm of the
    even-order matrix.
    """
    if not 1 <= m <= n - 2:
        raise ValueError("need 1 <= m <= n - 2")
    _require_bound_hypotheses(seq, n, alpha)
    base = (m * seq.term(n - m - 1) / seq.partial_sum(n)) ** (2 * alpha)
    if alpha >= 1.0:
        return (alpha ** 2 / (2 * alpha - 1)) * (n - m + 1) / m * base
    return (alpha ** 2 / (2 * alpha - 1)) * (n - m + 1) \
        * ((m + 1) ** (2 * alpha - 1) - 1) / m ** (2 * alpha) * base


def sharpness_probe(seq: DeterminingSequence, n_grid, seed: int = 0) -> list[tuple[int, float]]:
    """Spectral norms of the even-order matrices at the endpoint exponent 1/2.

    Unbounded growth along the grid is the numerical evidence that the
    summability threshold alpha > 1/2 cannot be lowered.
    """
    out = []
    for n in n_grid:
        if n < 1:
            raise ValueError("grid points must be >= 1")
        c = _c_vector(seq, 2 * n, 0.5)
        out.append((int(n), _spectral_norm_from_c(c, seed=seed)))
    return out


def dirichlet_operator_matrix(seq: DeterminingSequence, n: int, alpha: float,
                              truncation_degree: int) -> np.ndarray:
    """The operator on polynomials of degree <= truncation_degree, written in
    the orthonormal energy coordinates of the unit boundary atom at 1.

    A polynomial splits as f = a + (z-1)g with energy coordinates b = the
    coefficients of g; the operator preserves f(0) and acts on b alone, so
    the returned matrix is that d x d block (d = truncation_degree).  Its
    spectral norm increases with d (nested invariant subspaces) and
    approaches the multiplier-matrix norm from below.
    """
    if n < 0:
        raise ValueError("operator order must be >= 0")
    if truncation_degree < max(n, 1):
        raise ValueError("truncation_degree must be >= n (and >= 1)")
    d = truncation_degree
    kmax = min(n, d)
    m = np.zeros(d + 1)
    P = seq.partial_sums(n)
    m[: kmax + 1] = np.exp(alpha * np.log(P[n - np.arange(kmax + 1)] / P[n]))
    # column j holds the energy coordinates of the image of the basis
    # polynomial with quotient z^j: f_0 = z, f_j = z^{j+1} - z^j for j >= 1
    B = np.zeros((d, d))
    B[0, 0] = m[1]
    for j in range(1, d):
        B[:j, j] = m[j + 1] - m[j]
        B[j, j] = m[j + 1]
    return B
