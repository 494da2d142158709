import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rffkrr import (
    KernelSpec,
    NumericalError,
    classify_accuracy,
    cross_validate,
    feature_map,
    fit,
    fit_exact,
    kernel_matrix,
    make_sampler,
    predict,
    sample_mc,
    spectral_density,
)

DENSITY = spectral_density(KernelSpec(1.0), 2)


def test_fit_scalar_closed_form():
    # Z = (1, 0)^T, y = (1, 0), n*lam = 1: beta = 1 / (1 + 1)
    model = fit(np.array([[1.0], [0.0]]), np.array([1.0, 0.0]), 0.5)
    assert model.beta[0] == pytest.approx(0.5, abs=1e-12)


def test_fit_zero_labels_gives_zero_coefficients():
    Z = np.random.default_rng(0).standard_normal((6, 4))
    model = fit(Z, np.zeros(6), 0.1)
    np.testing.assert_array_equal(model.beta, np.zeros(4))


def test_fit_matches_explicit_inverse():
    rng = np.random.default_rng(40)
    X = rng.uniform(size=(12, 2))
    y = np.where(rng.uniform(size=12) > 0.5, 1.0, -1.0)
    Z = feature_map(X, sample_mc(DENSITY, 3, 77)).entries
    lam = 0.2
    model = fit(Z, y, lam)
    expected = np.linalg.inv(Z.T @ Z + 12 * lam * np.eye(6)) @ Z.T @ y
    np.testing.assert_allclose(model.beta, expected, atol=1e-9)


def test_fit_residual_contract():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        Z = rng.standard_normal((30, 8))
        y = rng.standard_normal(30)
        model = fit(Z, y, 0.05)
        rhs = Z.T @ y
        residual = rhs - (Z.T @ Z + 30 * 0.05 * np.eye(8)) @ model.beta
        assert np.linalg.norm(residual) <= 1e-8 * np.linalg.norm(rhs)


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit(np.ones((3, 2)), np.ones(4), 0.1)
    with pytest.raises(ValueError):
        fit(np.ones((3, 2)), np.ones(3), 0.0)
    with pytest.raises(ValueError):
        fit(np.array([[np.inf, 0.0]]), np.ones(1), 0.1)


def test_fit_exact_identity_kernel():
    y = np.array([2.0, -1.0, 0.5, 3.0])
    alpha = fit_exact(np.eye(4), y, 0.25)  # n*lam = 1
    np.testing.assert_allclose(alpha, y / 2, atol=1e-12)


def test_fit_exact_heavy_regularization_shrinks():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(20, 2))
    y = np.where(rng.uniform(size=20) > 0.5, 1.0, -1.0)
    alpha = fit_exact(kernel_matrix(X, KernelSpec(1.0)), y, 1e6)
    assert np.linalg.norm(alpha) <= 1e-5 * np.linalg.norm(y)


def test_fit_exact_refuses_large_n():
    with pytest.raises(ValueError, match="cap"):
        fit_exact(np.eye(2001), np.ones(2001), 0.1)


def test_feature_fit_matches_exact_fit_when_factor_is_exact():
    # With K = Z Z^T exactly, training predictions from the feature-space
    # solve and the kernel-space solve coincide.
    rng = np.random.default_rng(40)
    X = rng.uniform(size=(12, 2))
    y = np.where(rng.uniform(size=12) > 0.5, 1.0, -1.0)
    pool = sample_mc(DENSITY, 10, 50)
    Z = feature_map(X, pool)
    K = Z.entries @ Z.entries.T
    alpha = fit_exact(K, y, 0.3)
    model = fit(Z, y, 0.3, pool)
    np.testing.assert_allclose(Z.entries @ model.beta, K @ alpha, atol=1e-6)


def test_predict_matches_row_loop():
    rng = np.random.default_rng(40)
    X = rng.uniform(size=(12, 2))
    y = rng.standard_normal(12)
    pool = sample_mc(DENSITY, 10, 50)
    model = fit(feature_map(X, pool), y, 0.3, pool)
    X_new = rng.uniform(size=(8, 2))
    preds = predict(model, X_new)
    for j in range(8):
        row = feature_map(X_new[j : j + 1], pool).entries.ravel()
        assert preds[j] == pytest.approx(row @ model.beta, abs=1e-12)


def test_predict_requires_pool():
    model = fit(np.ones((2, 2)), np.ones(2), 0.1)
    with pytest.raises(ValueError):
        predict(model, np.ones((1, 2)))


def test_accuracy_counting():
    labels = np.array([1.0, 1.0, 1.0, -1.0])
    assert classify_accuracy(labels, labels) == 1.0
    assert classify_accuracy(-labels, labels) == 0.0
    assert classify_accuracy(np.array([1.0, -1.0, 1.0, -1.0]), labels) == 0.75
    # zero predictions count as +1
    assert classify_accuracy(np.zeros(2), np.array([1.0, -1.0])) == 0.5


def test_accuracy_validation():
    with pytest.raises(ValueError):
        classify_accuracy(np.ones(2), np.ones(3))
    with pytest.raises(ValueError):
        classify_accuracy(np.ones(2), np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        classify_accuracy(np.empty(0), np.empty(0))


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e6))
def test_accuracy_scale_invariant(scale):
    preds = np.array([0.3, -2.0, 0.01, -0.4])
    labels = np.array([1.0, 1.0, -1.0, -1.0])
    assert classify_accuracy(preds * scale, labels) == classify_accuracy(preds, labels)


def test_data_fit_term_nondecreasing_in_lambda():
    rng = np.random.default_rng(0)
    X = rng.uniform(size=(25, 2))
    y = np.where(rng.uniform(size=25) > 0.4, 1.0, -1.0)
    Z = feature_map(X, sample_mc(DENSITY, 6, 9))
    fits = []
    for lam in (0.01, 0.05, 0.1, 0.5, 1.0, 5.0):
        model = fit(Z, y, lam)
        residual = y - Z.entries @ model.beta
        fits.append(float(residual @ residual) / 25)
    assert np.all(np.diff(fits) >= -1e-12)


def _blob(seed=0, n_pos=70, n_neg=30, spread=0.05):
    rng = np.random.default_rng(seed)
    X = np.concatenate(
        [
            rng.normal(0.25, spread, size=(n_pos, 2)),
            rng.normal(0.75, spread, size=(n_neg, 2)),
        ]
    )
    y = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
    return X, y


def test_cv_single_lambda_grid():
    X, y = _blob()
    sampler = make_sampler("RFF", KernelSpec(1.0), 4, 4)
    report = cross_validate(X, y, sampler, (0.3,), folds=3)
    assert report.chosen_lambda == 0.3
    assert report.lambda_grid == (0.3,)


def test_cv_deduplicates_grid():
    X, y = _blob()
    sampler = make_sampler("RFF", KernelSpec(1.0), 4, 4)
    a = cross_validate(X, y, sampler, (0.1, 0.5), folds=3, seed=4)
    b = cross_validate(X, y, sampler, (0.5, 0.1, 0.5, 0.1), folds=3, seed=4)
    assert a.lambda_grid == b.lambda_grid
    np.testing.assert_array_equal(a.fold_accuracy, b.fold_accuracy)
    assert a.chosen_lambda == b.chosen_lambda


def test_cv_prefers_interpolation_on_imbalanced_blob():
    # lam = 10 washes predictions toward the majority sign (0.7 accuracy);
    # lam = 1e-6 lets the model separate the blobs.
    X, y = _blob()
    sampler = make_sampler("RFF", KernelSpec(1.0), 8, 8)
    report = cross_validate(X, y, sampler, (1e-6, 10.0), folds=5, seed=0)
    assert report.chosen_lambda == 1e-6
    assert report.mean_accuracy[0] > report.mean_accuracy[1]


def test_cv_ties_resolve_to_larger_lambda():
    # both regularizers classify the well-separated blob perfectly
    X, y = _blob(n_pos=50, n_neg=50)
    sampler = make_sampler("RFF", KernelSpec(1.0), 16, 16)
    report = cross_validate(X, y, sampler, (0.01, 0.02), folds=3, seed=1)
    assert report.mean_accuracy[0] == report.mean_accuracy[1] == 1.0
    assert report.chosen_lambda == 0.02


def test_cv_deterministic_and_shape():
    X, y = _blob(seed=3)
    sampler = make_sampler("SurrogateRFF", KernelSpec(1.0), 4, 8)
    a = cross_validate(X, y, sampler, (0.05, 0.5), folds=4, seed=11)
    b = cross_validate(X, y, sampler, (0.05, 0.5), folds=4, seed=11)
    np.testing.assert_array_equal(a.fold_accuracy, b.fold_accuracy)
    assert a.fold_accuracy.shape == (4, 2)
    np.testing.assert_allclose(a.mean_accuracy, a.fold_accuracy.mean(axis=0))


def test_cv_fast_path_agrees_with_per_lambda_resampling():
    # A lambda-independent sampler may be driven through either branch;
    # both must produce the same report because pools depend only on seeds.
    X, y = _blob(seed=5)
    fast = make_sampler("RFF", KernelSpec(1.0), 6, 6)
    slow = make_sampler("RFF", KernelSpec(1.0), 6, 6)
    slow.lambda_dependent = True
    a = cross_validate(X, y, fast, (0.05, 1.0), folds=3, seed=2)
    b = cross_validate(X, y, slow, (0.05, 1.0), folds=3, seed=2)
    np.testing.assert_allclose(a.fold_accuracy, b.fold_accuracy)
    assert a.chosen_lambda == b.chosen_lambda


def test_cv_validation():
    X, y = _blob()
    sampler = make_sampler("RFF", KernelSpec(1.0), 4, 4)
    with pytest.raises(ValueError):
        cross_validate(X, y, sampler, (), folds=3)
    with pytest.raises(ValueError):
        cross_validate(X, y, sampler, (0.0, 0.1), folds=3)
    with pytest.raises(ValueError):
        cross_validate(X, y, sampler, (0.1,), folds=1)
    with pytest.raises(ValueError):
        cross_validate(X[:2], y[:2], sampler, (0.1,), folds=3)
