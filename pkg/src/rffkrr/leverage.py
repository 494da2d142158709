"""Ridge leverage scores, the inversion-free surrogate, and the resampling
pipelines built on them.

For a frequency w with paired cosine/sine columns c, s in R^n (entries
cos(w.x_j), sin(w.x_j)) and regularization lambda, the exact ridge
leverage function is

    l(w) = p(w) [ c^T (K + n lam I)^{-1} c  +  s^T (K + n lam I)^{-1} s ],

whose integral over frequency space equals the effective degrees of
freedom Tr[K (K + n lam I)^{-1}].  Computing it needs an n x n solve.  The
surrogate replaces the inverse with a label-driven upper bound,

    L(w) = p(w) [ (y^T c)^2 + (y^T s)^2 + n (||c||^2 + ||s||^2) ] / (n^2 lam),

which dominates l(w) pointwise and integrates to the surrogate degrees of
freedom (y^T K y + n Tr K) / (n^2 lam).  The simplified variant keeps only
the label term.  Neither needs a linear solve, which is the entire point:
scoring a pool of l frequencies costs one pass over the (n, 2l) feature
matrix.

Pools scored here must be unweighted draws from the spectral density p
(plain Monte Carlo pools).  Because such a pool is already p-distributed,
the p(w_i) factors cancel when scores are normalized into resampling
probabilities, so the pipelines score with density values of 1; explicit
density values are accepted for diagnostics such as domination checks.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NumericalError
from .features import (
    FeatureMatrix,
    FrequencyPool,
    PoolSource,
    feature_map,
    make_rng,
    sample_mc,
    spawn_seeds,
)
from .kernels import matrix_entries, spectral_density


class ScoreKind(enum.Enum):
    """Which leverage function produced a set of scores."""

    EXACT_ERLS = "exact-erls"
    SURROGATE = "surrogate"
    SURROGATE_SIMPLIFIED = "surrogate-simplified"


def _source_for_kind(kind):
    if kind is ScoreKind.EXACT_ERLS:
        return PoolSource.LEVERAGE_RESAMPLED
    return PoolSource.SURROGATE_RESAMPLED


@dataclass(frozen=True)
class LeverageScores:
    """Per-frequency scores with their empirical normalization constant.

    ``normalizer`` is the plain sum of ``per_frequency``; dividing by it
    yields the resampling probabilities.
    """

    per_frequency: np.ndarray
    normalizer: float
    kind: ScoreKind

    def __post_init__(self):
        per = np.asarray(self.per_frequency, dtype=float).ravel()
        if per.size == 0:
            raise ValueError("empty score vector")
        if not np.all(np.isfinite(per)) or np.any(per < 0):
            raise ValueError("scores must be finite and nonnegative")
        object.__setattr__(self, "per_frequency", per)


@dataclass(frozen=True)
class ResamplePlan:
    """Multinomial resampling plan over a pool of frequencies.

    ``kind`` records which leverage function produced the probabilities so
    that :func:`resample` can tag the output pool's provenance.
    """

    pool_size: int
    target: int
    probabilities: np.ndarray
    kind: ScoreKind

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float).ravel()
        if probs.shape[0] != self.pool_size:
            raise ValueError(
                f"{probs.shape[0]} probabilities for a pool of {self.pool_size}"
            )
        if not 1 <= self.target <= self.pool_size:
            raise ValueError(f"target {self.target} outside 1..{self.pool_size}")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "probabilities", probs)


def _pair_sums(values):
    """Sum consecutive (cos, sin) column values into per-frequency totals."""
    return values.reshape(-1, 2).sum(axis=1)


def _pool_arrays(z_pool, n=None):
    Z = z_pool.entries
    size = z_pool.n_frequencies
    if n is not None and Z.shape[0] != n:
        raise ValueError(f"feature matrix has {Z.shape[0]} rows, expected {n}")
    return Z, size


def _density_vector(density_values, size):
    if density_values is None:
        return np.ones(size)
    dens = np.asarray(density_values, dtype=float).ravel()
    if dens.shape[0] != size:
        raise ValueError(f"{dens.shape[0]} density values for {size} frequencies")
    if not np.all(np.isfinite(dens)) or np.any(dens < 0):
        raise ValueError("density values must be finite and nonnegative")
    return dens


def regularized_factor(K, lam):
    """Cholesky factor of K + n lam I, reusable across exact-leverage calls.

    Refuses n beyond the exact-mode cap in :mod:`rffkrr.linalg`.
    """
    Km = matrix_entries(K)
    n = Km.shape[0]
    linalg.check_exact_cap(n)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return linalg.psd_factor(Km + n * lam * np.eye(n))


def exact_leverage(kreg_factor, z_pool, density_values=None):
    """Exact ridge leverage of each pool frequency, via n x n solves.

    ``kreg_factor`` comes from :func:`regularized_factor`; ``z_pool`` is
    the feature matrix of an unweighted pool on the same n points.  Cost
    is one triangular solve against all 2l columns.
    """
    n = kreg_factor[0].shape[0]
    Z, size = _pool_arrays(z_pool, n)
    dens = _density_vector(density_values, size)
    solved = linalg.factor_solve(kreg_factor, Z)
    # Columns of z_pool carry a 1/sqrt(l) normalization; the leverage
    # function is defined on raw cos/sin vectors, hence the factor l.
    quad = size * np.einsum("ij,ij->j", Z, solved)
    per_frequency = dens * np.clip(_pair_sums(quad), 0.0, None)
    return LeverageScores(
        per_frequency, float(per_frequency.sum()), ScoreKind.EXACT_ERLS
    )


def surrogate_leverage(y, z_pool, lam, density_values=None, simplified=False):
    """Solve-free surrogate leverage of each pool frequency.

    Needs only the label correlations y^T Z and, for the full variant, the
    column norms of Z.  ``density_values`` defaults to 1 for every
    frequency, which is the correct choice when the scores feed a
    resampling plan over a pool already drawn from the spectral density.
    """
    y = np.asarray(y, dtype=float).ravel()
    if not np.all(np.isfinite(y)):
        raise ValueError("labels contain NaN or Inf")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    n = y.shape[0]
    Z, size = _pool_arrays(z_pool, n)
    dens = _density_vector(density_values, size)

    correlations = y @ Z
    label_term = size * _pair_sums(correlations**2)
    if simplified:
        raw = label_term
    else:
        norm_term = size * _pair_sums((Z * Z).sum(axis=0))
        raw = label_term + n * norm_term
    per_frequency = dens * raw / (n**2 * lam)
    kind = ScoreKind.SURROGATE_SIMPLIFIED if simplified else ScoreKind.SURROGATE
    return LeverageScores(per_frequency, float(per_frequency.sum()), kind)


def approx_ridge_leverage(z_pool, lam, density_values=None):
    """Feature-space approximate ridge leverage (the classical baseline).

    Scores column j of the pool's feature matrix by the diagonal of
    G (G + n lam I)^{-1} with G = Z^T Z, then sums cos/sin pairs.  By the
    push-through identity this equals the exact leverage with K replaced
    by Z Z^T, up to the pool-size scaling of the columns.  Cost is
    O(n l^2 + l^3): cheaper than exact leverage for l << n, but still a
    factorization the surrogate avoids.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    Z, size = _pool_arrays(z_pool)
    n = Z.shape[0]
    dens = _density_vector(density_values, size)
    gram = Z.T @ Z
    ridge = gram + n * lam * np.eye(gram.shape[0])
    solved = linalg.psd_solve(ridge, gram)
    per_frequency = dens * np.clip(_pair_sums(np.diag(solved)), 0.0, None)
    return LeverageScores(
        per_frequency, float(per_frequency.sum()), ScoreKind.EXACT_ERLS
    )


def degrees_of_freedom(K, lam):
    """Effective degrees of freedom Tr[K (K + n lam I)^{-1}].

    Equals sum_i eig_i / (eig_i + n lam); computed here by a Cholesky
    solve rather than an eigendecomposition.
    """
    Km = matrix_entries(K)
    n = Km.shape[0]
    linalg.check_exact_cap(n)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    solved = linalg.psd_solve(Km + n * lam * np.eye(n), Km)
    return float(np.trace(solved))


def surrogate_dof(K, y, lam):
    """Surrogate degrees of freedom (y^T K y + n Tr K) / (n^2 lam).

    Dominates :func:`degrees_of_freedom` for every PSD K and needs no
    solve.
    """
    Km = matrix_entries(K)
    n = Km.shape[0]
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != n:
        raise ValueError(f"{y.shape[0]} labels for {n} points")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return float((y @ Km @ y + n * np.trace(Km)) / (n**2 * lam))


def build_resample_plan(scores, target):
    """Normalize scores into multinomial resampling probabilities."""
    per = scores.per_frequency
    if not 1 <= target <= per.shape[0]:
        raise ValueError(
            f"cannot draw {target} frequencies from a pool of {per.shape[0]}"
        )
    total = per.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise NumericalError("all leverage scores are zero; cannot build a plan")
    probs = per / total
    probs = probs / probs.sum()
    return ResamplePlan(per.shape[0], int(target), probs, scores.kind)


def _draw_indices(plan, seed):
    rng = make_rng(seed)
    return rng.choice(
        plan.pool_size, size=plan.target, replace=True, p=plan.probabilities
    )


def resample(plan, pool, seed):
    """Draw a weighted pool of ``plan.target`` frequencies with replacement.

    The weight attached to a frequency drawn with probability q_i from a
    pool of size l with prior ratio r_i is r_i / (l q_i), which keeps the
    kernel estimate of the resampled feature map unbiased.  Frequencies
    whose probability underflowed to zero are never drawn.  The output
    pool's source tag follows the leverage kind recorded on the plan.
    """
    if plan.pool_size != pool.size:
        raise ValueError(
            f"plan covers {plan.pool_size} frequencies, pool has {pool.size}"
        )
    indices = _draw_indices(plan, seed)
    weights = pool.weights[indices] / (plan.pool_size * plan.probabilities[indices])
    return FrequencyPool(
        pool.frequencies[indices], weights, _source_for_kind(plan.kind)
    )


def _gather_features(z_pool, indices, weights, target):
    # Reuse the pooled cos/sin columns instead of re-evaluating the map:
    # column pair 2i, 2i+1 of the pool, rescaled from sqrt(1/l) to
    # sqrt(w/s), gives the resampled feature pair.
    pool_size = z_pool.n_frequencies
    column_index = np.empty(2 * target, dtype=np.int64)
    column_index[0::2] = 2 * indices
    column_index[1::2] = 2 * indices + 1
    factors = np.repeat(np.sqrt(pool_size * weights / target), 2)
    return FeatureMatrix(z_pool.entries[:, column_index] * factors, target)


def _resample_pipeline(X, y, spec, s, lam, pool_size, seed, score_fn, return_features):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    pool_size = int(s) if pool_size is None else int(pool_size)
    if pool_size < s:
        raise ValueError(f"pool size {pool_size} is smaller than s={s}")
    seed_pool, seed_draw = spawn_seeds(seed, 2)
    density = spectral_density(spec, X.shape[1])
    pool = sample_mc(density, pool_size, seed_pool)
    z_pool = feature_map(X, pool)
    scores = score_fn(z_pool)
    plan = build_resample_plan(scores, s)
    indices = _draw_indices(plan, seed_draw)
    weights = 1.0 / (pool_size * plan.probabilities[indices])
    out = FrequencyPool(
        pool.frequencies[indices], weights, _source_for_kind(scores.kind)
    )
    if not return_features:
        return out
    return out, _gather_features(z_pool, indices, weights, s)


def surrogate_pipeline(
    X,
    y,
    spec,
    s,
    lam,
    pool_size=None,
    variant="simplified",
    seed=0,
    return_features=False,
):
    """Draw a pool, score it with the surrogate, and resample s frequencies.

    Runs without a single linear solve.  ``pool_size`` defaults to s;
    larger pools give the resampler more to choose from.  With
    ``return_features=True`` also returns the (n, 2s) feature matrix,
    assembled by gathering pooled columns rather than re-evaluating the
    map.  The returned pool carries importance weights 1 / (l q_i).
    """
    if variant not in ("full", "simplified"):
        raise ValueError(f"unknown variant {variant!r}")
    return _resample_pipeline(
        X,
        y,
        spec,
        s,
        lam,
        pool_size,
        seed,
        lambda z_pool: surrogate_leverage(
            y, z_pool, lam, simplified=(variant == "simplified")
        ),
        return_features,
    )


def erls_baseline_pipeline(
    X,
    y,
    spec,
    s,
    lam,
    pool_size=None,
    seed=0,
    return_features=False,
):
    """Pool-and-resample pipeline scored by approximate ridge leverage.

    Identical flow to :func:`surrogate_pipeline` but the scoring step
    factors the pooled feature Gram matrix, so it pays the O(n l^2 + l^3)
    cost the surrogate exists to avoid.  Labels are ignored by the scores
    and accepted only for signature parity with the surrogate pipeline.
    """
    return _resample_pipeline(
        X,
        y,
        spec,
        s,
        lam,
        pool_size,
        seed,
        lambda z_pool: approx_ridge_leverage(z_pool, lam),
        return_features,
    )
