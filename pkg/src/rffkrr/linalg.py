"""Dense linear-algebra helpers: counted SPD solves and a power-method
spectral norm.

Every Cholesky factorization and triangular solve in the package goes
through this module so that tests can count how many linear solves a code
path performs.  The point of the surrogate sampling pipeline is that it
runs without any solves at all, and the counter is how that claim is
checked rather than merely asserted.
"""

import numpy as np
import scipy.linalg

from .errors import NumericalError

_solve_count = 0

# Dense O(n^3) routines (exact leverage, exact KRR, eigendecompositions)
# refuse matrices beyond this order; larger problems should be subsampled.
EXACT_MODE_CAP = 2000

# Fixed entropy for the power-iteration start vector.  A seeded start makes
# spectral-norm results reproducible bit-for-bit across runs and worker
# counts.
_POWER_SEED = 0x5EED


def check_exact_cap(n):
    if n > EXACT_MODE_CAP:
        raise ValueError(
            f"exact-mode computation on n={n} points exceeds the "
            f"n={EXACT_MODE_CAP} cap; subsample first"
        )


def solve_count():
    """Number of counted factorizations/solves since the last reset."""
    return _solve_count


def reset_solve_count():
    global _solve_count
    _solve_count = 0


def _bump():
    global _solve_count
    _solve_count += 1


def psd_factor(mat):
    """Cholesky-factor a symmetric positive definite matrix.  Counted.

    Returns an opaque factor object accepted by :func:`factor_solve`.
    Raises NumericalError if the matrix is not positive definite.
    """
    _bump()
    try:
        return scipy.linalg.cho_factor(np.asarray(mat, dtype=float), lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"matrix is not positive definite: {exc}") from exc


def factor_solve(factor, rhs):
    """Solve A x = rhs given a factor from :func:`psd_factor`.  Counted."""
    _bump()
    return scipy.linalg.cho_solve(factor, np.asarray(rhs, dtype=float))


def psd_solve(mat, rhs):
    """Factor-and-solve convenience wrapper (two counted operations)."""
    return factor_solve(psd_factor(mat), rhs)


def spectral_norm_sym(mat, tol=1e-9, max_iter=10_000):
    """Largest absolute eigenvalue of a symmetric matrix by power iteration.

    Iterates v <- A v / ||A v|| from a fixed seeded start vector and stops
    when the norm estimate is stable to a relative tolerance of ``tol``
    (default 1e-9), capped at ``max_iter`` iterations.  The zero matrix
    returns 0.0.  Symmetry of the input is the caller's responsibility;
    for a symmetric matrix the iterate norm converges to |lambda_max| even
    when the extreme eigenvalues come in +/- pairs.
    """
    a = np.asarray(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix has no spectral norm")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix contains NaN or Inf")

    v = np.random.default_rng(_POWER_SEED).standard_normal(n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iter):
        w = a @ v
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            # v landed in the null space; for the zero matrix this is exact,
            # otherwise restart deterministically from a shifted vector.
            if not a.any():
                return 0.0
            v = np.random.default_rng(_POWER_SEED + 1).standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        v = w / norm_w
        if abs(norm_w - estimate) <= tol * norm_w:
            return norm_w
        estimate = norm_w
    return estimate
