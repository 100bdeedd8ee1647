import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riskforge.dataset import Dataset, stratified_k_fold
from riskforge.lasso import (FeatureSelection, critical_penalty, fit_lasso,
                             restrict, select_features, soft_threshold)

from .conftest import make_blobs, standardized


class TestSoftThreshold:
    def test_spot_values(self):
        assert soft_threshold(3.0, 1.0) == 2.0
        assert soft_threshold(-0.5, 1.0) == 0.0
        assert soft_threshold(-3.0, 1.0) == -2.0

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-1e6, 1e6, allow_nan=False))
    def test_zero_gamma_is_identity(self, z):
        assert soft_threshold(z, 0.0) == z

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-100, 100), st.floats(0, 100))
    def test_shrinks_toward_zero(self, z, gamma):
        out = soft_threshold(z, gamma)
        assert abs(out) <= abs(z)
        assert out * z >= 0.0  # never flips sign

    def test_negative_gamma_rejected(self):
        with pytest.raises(ValueError):
            soft_threshold(1.0, -0.1)


def _random_system(seed, n=5, p=2):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    X -= X.mean(axis=0)
    beta = rng.normal(size=p)
    y = X @ beta + rng.normal(0, 0.1, size=n) + rng.normal()
    return X, y


class TestFitLasso:
    def test_above_critical_all_zero(self):
        X, y = _random_system(0)
        lam = critical_penalty(X, y)
        model = fit_lasso(X, y, lam * 1.000001)
        assert (model.coefficients == 0.0).all()
        assert model.intercept == pytest.approx(y.mean())

    @pytest.mark.parametrize("seed", range(5))
    def test_zero_penalty_matches_normal_equations(self, seed):
        X, y = _random_system(seed)
        model = fit_lasso(X, y, 0.0, tol=1e-12)
        A = np.hstack([np.ones((X.shape[0], 1)), X])
        exact = np.linalg.solve(A.T @ A, A.T @ y)
        assert model.coefficients == pytest.approx(exact[1:], abs=1e-6)
        assert model.intercept == pytest.approx(exact[0], abs=1e-6)

    def test_single_informative_predictor(self):
        rng = np.random.default_rng(3)
        x1 = rng.normal(size=50)
        x1 = (x1 - x1.mean()) / x1.std()
        x2 = rng.normal(size=50)
        x2 = (x2 - x2.mean()) / x2.std()
        X = np.column_stack([x1, x2])
        y = 2.0 * x1
        model = fit_lasso(X, y, 0.5, tol=1e-10)
        # single-predictor closed form: soft_threshold(x1 . y, lam/2) / (x1 . x1)
        # holds when x2 stays at zero
        expected = soft_threshold(float(x1 @ y), 0.25) / float(x1 @ x1)
        assert model.coefficients[0] == pytest.approx(expected, rel=1e-4)
        assert abs(model.coefficients[0] - 2.0) < 0.05
        assert abs(model.coefficients[1]) < 0.02

    def test_objective_monotone_with_debug(self):
        for seed in range(20):
            X, y = _random_system(seed, n=12, p=4)
            lam = 0.3 * critical_penalty(X, y)
            fit_lasso(X, y, lam, debug=True)  # asserts internally each sweep

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            fit_lasso(np.array([[np.inf]]), np.array([1.0]), 0.1)

    def test_penalty_monotone_l1_norm(self):
        X, y = _random_system(7, n=40, p=5)
        X /= X.std(axis=0)
        lam_max = critical_penalty(X, y)
        grid = np.geomspace(lam_max, lam_max * 1e-3, 12)
        norms = [np.abs(fit_lasso(X, y, lam, tol=1e-10).coefficients).sum()
                 for lam in grid]
        for larger, smaller in zip(norms, norms[1:]):
            assert larger <= smaller + 1e-8

    def test_grid_search_oracle_small_problems(self):
        # coordinate descent matches a brute-force lattice minimizer
        rng = np.random.default_rng(11)
        for _ in range(3):
            n, p = 6, 2
            X = rng.normal(size=(n, p))
            X -= X.mean(axis=0)
            y = X @ rng.normal(size=p) + rng.normal(0, 0.2, n)
            y -= y.mean()  # keep the lattice search 2-D
            lam = 0.4 * critical_penalty(X, y)
            model = fit_lasso(X, y, lam, tol=1e-12)
            grid = np.linspace(-3, 3, 241)  # resolution 0.025
            best, best_obj = None, np.inf
            for b1, b2 in itertools.product(grid, grid):
                beta = np.array([b1, b2])
                r = y - X @ beta - model.intercept
                obj = r @ r + lam * np.abs(beta).sum()
                if obj < best_obj:
                    best, best_obj = beta, obj
            assert np.abs(model.coefficients - best).max() <= 0.025 + 1e-9

    def test_deterministic(self):
        X, y = _random_system(5)
        a = fit_lasso(X, y, 0.2)
        b = fit_lasso(X, y, 0.2)
        assert (a.coefficients == b.coefficients).all()
        assert a.intercept == b.intercept


class TestSelectFeatures:
    def _informative_dataset(self, seed=0, n=210):
        """3 informative columns drive class-dependent targets, 3 pure noise."""
        rng = np.random.default_rng(seed)
        y = np.repeat(np.arange(3), n // 3)
        centers = np.array([[2.0, -2.0, 0.0], [-2.0, 0.0, 2.0], [0.0, 2.0, -2.0]])
        signal = centers[y] + rng.normal(0, 0.4, size=(n, 3))
        noise = rng.normal(0, 1.0, size=(n, 3))
        X = np.hstack([signal, noise])
        names = ["s0", "s1", "s2", "u0", "u1", "u2"]
        return standardized(Dataset(X, names, y, ["a", "b", "c"]))

    def test_informative_kept_noise_dropped(self):
        data = self._informative_dataset()
        folds = stratified_k_fold(data, 3, seed=1)
        selection = select_features(data, None, folds)
        assert {0, 1, 2} <= set(selection.selected)
        excluded_noise = {3, 4, 5} - set(selection.selected)
        assert len(excluded_noise) >= 2

    def test_union_invariant(self):
        data = self._informative_dataset(seed=4)
        folds = stratified_k_fold(data, 3, seed=2)
        selection = select_features(data, None, folds)
        union = sorted(set().union(*selection.per_class_supports))
        assert list(selection.selected) == union

    def test_huge_grid_empty_selection_warns(self):
        data = self._informative_dataset(seed=1)
        folds = stratified_k_fold(data, 3, seed=0)
        with pytest.warns(RuntimeWarning, match="no features"):
            selection = select_features(data, [1e12], folds)
        assert selection.selected == ()

    def test_json_schema(self):
        data = self._informative_dataset(seed=2)
        folds = stratified_k_fold(data, 3, seed=0)
        selection = select_features(data, None, folds)
        doc = selection.to_json()
        assert set(doc) == {"lambda_used", "selected", "per_class"}
        assert set(doc["per_class"]) == {"a", "b", "c"}
        assert all(isinstance(name, str) for name in doc["selected"])


class TestRestrict:
    def test_identity_selection(self, blobs3):
        selection = FeatureSelection(tuple(range(blobs3.p)), (tuple(range(blobs3.p)),),
                                     0.1, blobs3.feature_names, blobs3.class_names)
        out = restrict(blobs3, selection)
        assert (out.features == blobs3.features).all()
        assert out.feature_names == blobs3.feature_names

    def test_subset_ascending(self, blobs3):
        selection = FeatureSelection((0, 2), ((2,), (0,)), 0.1,
                                     blobs3.feature_names, blobs3.class_names)
        out = restrict(blobs3, selection)
        assert out.feature_names == (blobs3.feature_names[0], blobs3.feature_names[2])
        assert (out.labels == blobs3.labels).all()

    def test_out_of_order_selection_comes_back_ascending(self, blobs3):
        selection = FeatureSelection((2, 0), ((2,), (0,)), 0.1,
                                     blobs3.feature_names, blobs3.class_names)
        out = restrict(blobs3, selection)
        assert out.feature_names == (blobs3.feature_names[0], blobs3.feature_names[2])
        assert (out.features[:, 1] == blobs3.features[:, 2]).all()

    def test_empty_selection_rejected(self, blobs3):
        selection = FeatureSelection((), ((),), 0.1,
                                     blobs3.feature_names, blobs3.class_names)
        with pytest.raises(ValueError, match="empty"):
            restrict(blobs3, selection)

    def test_out_of_range_rejected(self, blobs3):
        selection = FeatureSelection((0, 99), ((0,), (99,)), 0.1,
                                     blobs3.feature_names, blobs3.class_names)
        with pytest.raises(ValueError, match="out of range"):
            restrict(blobs3, selection)
