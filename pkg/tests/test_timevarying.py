"""Tests for kernel weighting, time-varying estimation and bandwidth selection."""

import numpy as np
import pytest

from core.exceptions import ValidationError
from models.factor import pairwise_factor_model
from models.options import MgmOptions, MvarOptions
from models.selection import SelectionSpec
from models.variables import Dataset, VariableSpec
from sampling.gibbs import sample_tvmgm
from timevarying.bandwidth import bw_select, stratified_test_rows
from timevarying.estimator import TvMgmEstimator, fit_tvmgm, fit_tvmvar
from timevarying.kernel import kernel_weights, normalize_timepoints, resolve_estpoints

G = VariableSpec.gaussian()


def _noise(n: int = 100, p: int = 2, seed: int = 0, **kwargs) -> Dataset:
    rng = np.random.default_rng(seed)
    return Dataset(values=rng.standard_normal((n, p)), specs=[G] * p, **kwargs)


class TestKernel:
    """Tests for the kernel helpers."""

    def test_weight_one_at_estimation_point(self):
        times = np.linspace(0, 1, 11)
        weights = kernel_weights(times, 0.5, 0.1).weights
        assert weights[5] == pytest.approx(1.0)
        assert weights.max() <= 1.0
        assert weights[0] == pytest.approx(np.exp(-12.5))

    def test_weights_symmetric(self):
        times = np.linspace(0, 1, 11)
        weights = kernel_weights(times, 0.5, 0.2).weights
        np.testing.assert_allclose(weights, weights[::-1])

    def test_local_n(self):
        result = kernel_weights(np.linspace(0, 1, 50), 0.3, 0.05)
        assert result.local_n == pytest.approx(result.weights.sum())

    def test_local_n_grows_with_bandwidth(self):
        times = np.linspace(0, 1, 100)
        local = [kernel_weights(times, 0.5, sigma).local_n for sigma in (0.01, 0.05, 0.1, 0.3, 1.0, 10.0)]
        assert np.all(np.diff(local) > 0)

    def test_huge_bandwidth_is_flat(self):
        times = np.linspace(0, 1, 100)
        for t_e in (0.0, 0.5, 1.0):
            weights = kernel_weights(times, t_e, 10.0).weights
            assert weights.max() - weights.min() < 0.01

    def test_boundary_has_less_local_data(self):
        times = np.linspace(0, 1, 100)
        centre = kernel_weights(times, 0.5, 0.1).local_n
        assert kernel_weights(times, 0.0, 0.1).local_n < centre
        assert kernel_weights(times, 1.0, 0.1).local_n < centre

    def test_bandwidth_must_be_positive(self):
        with pytest.raises(ValidationError):
            kernel_weights(np.linspace(0, 1, 5), 0.5, 0.0)

    def test_rows_equally_spaced_without_timepoints(self):
        np.testing.assert_allclose(normalize_timepoints(_noise(n=5)), [0, 0.25, 0.5, 0.75, 1])

    def test_timepoints_normalized(self):
        data = _noise(n=3, timepoints=[10.0, 12.0, 20.0])
        np.testing.assert_allclose(normalize_timepoints(data), [0.0, 0.2, 1.0])


class TestEstpoints:
    """Tests for estimation point resolution."""

    def test_count(self):
        np.testing.assert_allclose(resolve_estpoints(3, _noise()), [0.0, 0.5, 1.0])

    def test_normalized_sequence_sorted(self):
        np.testing.assert_allclose(resolve_estpoints([0.8, 0.2], _noise()), [0.2, 0.8])

    def test_raw_scale_sequence(self):
        data = _noise(n=3, timepoints=[10.0, 12.0, 20.0])
        np.testing.assert_allclose(resolve_estpoints([10.0, 15.0], data), [0.0, 0.5])

    def test_outside_time_range(self):
        data = _noise(n=3, timepoints=[10.0, 12.0, 20.0])
        with pytest.raises(ValidationError, match="time range"):
            resolve_estpoints([25.0], data)

    def test_zero_points(self):
        with pytest.raises(ValidationError):
            resolve_estpoints(0, _noise())


class TestTvEstimation:
    """Tests for kernel-weighted estimation."""

    def test_one_fit_per_point(self, ebic_selection, settings):
        data = _noise(n=120)
        fit = fit_tvmgm(data, MgmOptions(selection=ebic_selection), 3, 0.3, settings=settings)
        assert fit.model_type == "tvmgm"
        assert len(fit.fits) == 3
        np.testing.assert_allclose(fit.estpoints, [0.0, 0.5, 1.0])
        assert np.all(fit.local_n > 0)
        assert fit.local_n[1] > fit.local_n[0]
        assert fit.point_warnings == [None, None, None]

    def test_huge_bandwidth_matches_stationary_weights(self, ebic_selection, settings):
        data = _noise(n=80)
        fit = fit_tvmgm(data, MgmOptions(selection=ebic_selection), [0.5], 1e6, settings=settings)
        assert fit.local_n[0] == pytest.approx(80.0)

    def test_insufficient_local_data(self, ebic_selection, settings):
        data = _noise(n=60)
        fit = fit_tvmgm(data, MgmOptions(selection=ebic_selection), [0.5], 1e-4, settings=settings)
        assert fit.point_warnings[0].startswith("insufficient local data")
        assert np.all(fit.fits[0].wadj == 0)
        assert fit.fits[0].nodemeta[0].warnings == [fit.point_warnings[0]]

    def test_estpoints_override(self, ebic_selection, settings):
        estimator = TvMgmEstimator(MgmOptions(selection=ebic_selection), 5, 0.3, settings)
        fit = estimator.fit(_noise(n=80), estpoints=[0.25])
        assert fit.estpoints.tolist() == [0.25]

    def test_changing_dependency_tracked(self, settings):
        n = 600
        models = [
            pairwise_factor_model([G, G], {(0, 1): np.array([[0.7 * t / (n - 1)]])})
            for t in range(n)
        ]
        data = sample_tvmgm(models, n, seed=2, settings=settings)
        options = MgmOptions(selection=SelectionSpec(method="ebic", n_lambda=20))
        fit = fit_tvmgm(data, options, [0.05, 0.95], 0.1, settings=settings)
        assert fit.fits[1].wadj[0, 1] > fit.fits[0].wadj[0, 1]
        assert fit.fits[1].wadj[0, 1] > 0.2

    def test_tvmvar(self, ebic_selection, settings):
        data = _noise(n=150, p=3)
        fit = fit_tvmvar(data, [1], MvarOptions(selection=ebic_selection), 2, 0.5, settings=settings)
        assert fit.model_type == "tvmvar"
        assert fit.fits[0].wadj.shape == (3, 3, 1)
        assert fit.local_n[0] < 150


class TestBandwidthSelection:
    """Tests for time-stratified cross-validation."""

    def test_test_rows_spread_over_series(self):
        tests = stratified_test_rows(np.arange(100), 3, 5)
        assert len(tests) == 3
        assert all(len(t) == 5 for t in tests)
        assert tests[0][0] == 0 and tests[0][-1] == 94
        assert tests[2][0] == 2 and tests[2][-1] == 96

    def test_foldsize_too_large(self):
        with pytest.raises(ValidationError):
            stratified_test_rows(np.arange(10), 2, 10)

    def test_selects_from_candidates(self, ebic_selection, settings):
        data = _noise(n=100, p=2, seed=4)
        selection = bw_select(
            data,
            "mgm",
            [0.2, 1.0],
            bw_folds=2,
            bw_foldsize=5,
            options=MgmOptions(selection=ebic_selection),
            settings=settings,
        )
        assert selection.selected in (0.2, 1.0)
        assert selection.errors.shape == (2, 2, 2)
        assert selection.mean_errors.shape == (2,)
        assert len(selection.test_rows) == 2

    def test_mvar_requires_lags(self, settings):
        with pytest.raises(ValidationError, match="lags"):
            bw_select(_noise(n=60), "mvar", [0.5], bw_folds=2, bw_foldsize=5, settings=settings)
