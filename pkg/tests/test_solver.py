"""Tests for the weighted elastic-net GLM solver."""

import numpy as np
import pytest
from scipy.special import gammaln

from core.exceptions import DegenerateResponseError, EstimationError
from models.design import ColumnMeta, DesignMatrix, Term
from models.glm import GlmProblem, GlmSolution
from solver.families import mean_response, one_hot
from solver.solver import fit_glm, fit_path, kkt_violation, lambda_max, lambda_path, log_likelihood


def make_problem(x, y, family="gaussian", weights=None, n_classes=1, lam=0.0, alpha=1.0) -> GlmProblem:
    n, q = x.shape
    design = DesignMatrix(
        target=0,
        columns=x,
        colmeta=[ColumnMeta(sources=(j + 1,), categories=(None,), kind="continuous", group=j) for j in range(q)],
        terms=[Term(sources=(j + 1,)) for j in range(q)],
        rows=np.arange(n),
    )
    return GlmProblem(
        family=family,
        n_classes=n_classes,
        design=design,
        response=y,
        obs_weights=np.ones(n) if weights is None else weights,
        alpha=alpha,
        lam=lam,
    )


def standardized(rng, n, q):
    x = rng.standard_normal((n, q))
    return (x - x.mean(axis=0)) / x.std(axis=0, ddof=1)


class TestGaussian:
    """Tests for the gaussian family."""

    @pytest.mark.parametrize("seed", range(10))
    def test_unpenalized_matches_weighted_least_squares(self, seed, settings):
        rng = np.random.default_rng(seed)
        x = standardized(rng, 100, 5)
        y = x @ rng.standard_normal(5) + rng.standard_normal(100)
        w = rng.uniform(0.5, 2.0, 100)
        solution = fit_glm(make_problem(x, y, weights=w), settings=settings)

        design = np.column_stack([np.ones(100), x])
        sqrt_w = np.sqrt(w)
        exact, *_ = np.linalg.lstsq(design * sqrt_w[:, None], y * sqrt_w, rcond=None)
        np.testing.assert_allclose(solution.intercepts[0], exact[0], atol=1e-5)
        np.testing.assert_allclose(solution.beta, exact[1:], atol=1e-5)

    def test_fit_at_lambda_max_is_empty(self, settings):
        rng = np.random.default_rng(1)
        x = standardized(rng, 80, 4)
        y = 2.0 * x[:, 0] + rng.standard_normal(80)
        problem = make_problem(x, y)
        top = lambda_max(problem)
        assert fit_glm(problem.model_copy(update={"lam": top}), settings=settings).s0 == 0
        assert fit_glm(problem.model_copy(update={"lam": 0.9 * top}), settings=settings).s0 >= 1

    def test_residual_sd(self, settings):
        rng = np.random.default_rng(2)
        x = standardized(rng, 200, 2)
        y = x[:, 0] + 0.5 * rng.standard_normal(200)
        solution = fit_glm(make_problem(x, y), settings=settings)
        assert solution.residual_sd == pytest.approx(0.5, abs=0.08)

    def test_orthonormal_design_soft_thresholds(self, settings):
        rng = np.random.default_rng(15)
        n = 50
        raw = rng.standard_normal((n, 2))
        q, _ = np.linalg.qr(raw - raw.mean(axis=0))
        x = q * np.sqrt(n)
        y = 0.8 * x[:, 0] - 0.1 * x[:, 1] + rng.standard_normal(n)
        lam = 0.3
        solution = fit_glm(make_problem(x, y, lam=lam), settings=settings)
        score = x.T @ y / n
        oracle = np.sign(score) * np.maximum(np.abs(score) - lam, 0.0)
        np.testing.assert_allclose(solution.beta, oracle, atol=1e-6)

    def test_ridge_shrinks(self, settings):
        rng = np.random.default_rng(3)
        x = standardized(rng, 100, 3)
        y = x @ np.array([1.0, -1.0, 0.5]) + rng.standard_normal(100)
        ols = fit_glm(make_problem(x, y), settings=settings)
        ridge = fit_glm(make_problem(x, y, alpha=0.0, lam=1.0), settings=settings)
        assert np.linalg.norm(ridge.beta) < np.linalg.norm(ols.beta)
        assert ridge.s0 == 3


class TestPath:
    """Tests for penalty paths."""

    def test_path_descends_from_lambda_max(self, settings):
        rng = np.random.default_rng(4)
        x = standardized(rng, 60, 3)
        problem = make_problem(x, x[:, 1] + rng.standard_normal(60))
        lambdas = lambda_path(problem, n_lambda=15, settings=settings)
        assert lambdas.shape == (15,)
        assert lambdas[0] == pytest.approx(lambda_max(problem))
        assert np.all(np.diff(lambdas) < 0)
        assert lambdas[-1] / lambdas[0] == pytest.approx(1e-4)

    def test_path_must_descend(self, settings):
        rng = np.random.default_rng(5)
        x = standardized(rng, 30, 2)
        problem = make_problem(x, rng.standard_normal(30))
        with pytest.raises(EstimationError):
            fit_path(problem, 1.0, [0.1, 0.2], settings)

    def test_support_grows_along_path(self, settings):
        rng = np.random.default_rng(6)
        x = standardized(rng, 120, 6)
        y = x[:, :3] @ np.array([1.0, 0.6, 0.3]) + rng.standard_normal(120)
        problem = make_problem(x, y)
        solutions = fit_path(problem, 1.0, lambda_path(problem, n_lambda=20, settings=settings), settings)
        assert solutions[0].s0 == 0
        assert solutions[-1].s0 >= 3

    def test_warm_path_matches_cold_fits(self, settings):
        rng = np.random.default_rng(16)
        x = standardized(rng, 100, 5)
        y = x @ np.array([1.0, -0.5, 0.0, 0.3, 0.0]) + rng.standard_normal(100)
        problem = make_problem(x, y)
        lambdas = lambda_path(problem, n_lambda=10, settings=settings)
        for warm in fit_path(problem, 1.0, lambdas, settings):
            cold = fit_glm(problem.model_copy(update={"lam": warm.lam}), settings=settings)
            np.testing.assert_allclose(warm.coefficients, cold.coefficients, atol=1e-5)

    def test_warm_poisson_path_matches_cold_fits(self, settings):
        rng = np.random.default_rng(17)
        x = standardized(rng, 120, 3)
        y = rng.poisson(np.exp(0.3 + 0.5 * x[:, 0])).astype(float)
        problem = make_problem(x, y, family="poisson")
        lambdas = lambda_path(problem, n_lambda=8, settings=settings)
        warm = fit_path(problem, 1.0, lambdas, settings)[-1]
        cold = fit_glm(problem.model_copy(update={"lam": warm.lam}), settings=settings)
        np.testing.assert_allclose(warm.coefficients, cold.coefficients, atol=1e-5)

    def test_response_orthogonal_to_design(self):
        x = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]])
        y = np.array([1.0, -1.0, -1.0, 1.0])
        with pytest.raises(DegenerateResponseError, match="zero lambda_max"):
            lambda_max(make_problem(x, y))

    def test_constant_response(self):
        x = standardized(np.random.default_rng(7), 20, 2)
        with pytest.raises(DegenerateResponseError):
            lambda_max(make_problem(x, np.ones(20)))

    def test_single_observed_category(self):
        x = standardized(np.random.default_rng(8), 20, 2)
        with pytest.raises(DegenerateResponseError):
            lambda_max(make_problem(x, np.zeros(20), family="multinomial", n_classes=3))


class TestOptimality:
    """KKT conditions hold for converged fits of every family."""

    def _check_path(self, problem, settings):
        lambdas = lambda_path(problem, n_lambda=20, settings=settings)
        for solution in fit_path(problem, problem.alpha, lambdas, settings):
            if solution.converged:
                assert kkt_violation(solution, problem.model_copy(update={"lam": solution.lam})) <= 1e-4

    def test_gaussian_kkt(self, settings):
        rng = np.random.default_rng(9)
        x = standardized(rng, 150, 5)
        y = x @ np.array([1.0, 0.0, -0.5, 0.0, 0.2]) + rng.standard_normal(150)
        self._check_path(make_problem(x, y, alpha=0.5), settings)

    def test_poisson_kkt(self, settings):
        rng = np.random.default_rng(10)
        x = standardized(rng, 150, 4)
        y = rng.poisson(np.exp(0.5 + 0.4 * x[:, 0] - 0.3 * x[:, 2])).astype(float)
        self._check_path(make_problem(x, y, family="poisson"), settings)

    def test_multinomial_kkt(self, settings):
        rng = np.random.default_rng(11)
        x = standardized(rng, 200, 3)
        logits = np.column_stack([np.zeros(200), 1.5 * x[:, 0], -1.0 * x[:, 1]])
        probs = mean_response("multinomial", logits)
        y = np.array([rng.choice(3, p=p) for p in probs], dtype=float)
        self._check_path(make_problem(x, y, family="multinomial", n_classes=3), settings)


class TestLikelihood:
    """Tests for likelihood evaluation."""

    def test_weights_scale_loglik(self, settings):
        rng = np.random.default_rng(12)
        x = standardized(rng, 50, 2)
        y = x[:, 0] + rng.standard_normal(50)
        problem = make_problem(x, y)
        solution = fit_glm(problem, settings=settings)
        doubled = problem.with_weights(2.0 * np.ones(50))
        assert log_likelihood(solution, doubled, settings) == pytest.approx(2.0 * solution.loglik)

    def test_zero_weight_rows_ignored(self, settings):
        rng = np.random.default_rng(13)
        x = standardized(rng, 60, 2)
        y = x[:, 0] + 0.3 * rng.standard_normal(60)
        y_corrupt = np.array(y)
        y_corrupt[:10] = 100.0
        w = np.ones(60)
        w[:10] = 0.0
        clean = fit_glm(make_problem(x[10:], y[10:]), settings=settings)
        weighted = fit_glm(make_problem(x, y_corrupt, weights=w), settings=settings)
        np.testing.assert_allclose(weighted.beta, clean.beta, atol=1e-5)

    def test_uniform_multinomial_loglik(self, settings):
        x = standardized(np.random.default_rng(18), 9, 2)
        problem = make_problem(x, np.arange(9) % 3, family="multinomial", n_classes=3)
        uniform = GlmSolution(
            family="multinomial",
            coefficients=np.zeros((2, 3)),
            intercepts=np.zeros(3),
            lam=0.0,
            alpha=1.0,
            loglik=0.0,
            converged=True,
        )
        assert log_likelihood(uniform, problem, settings) == pytest.approx(-9 * np.log(3))

    def test_poisson_intercept_only_loglik(self, settings):
        y = np.array([1.0, 2.0, 3.0])
        problem = make_problem(np.array([[-1.0], [0.0], [1.0]]), y, family="poisson")
        solution = fit_glm(problem.model_copy(update={"lam": 2.0 * lambda_max(problem)}), settings=settings)
        assert solution.s0 == 0
        assert solution.intercepts[0] == pytest.approx(np.log(2.0))
        expected = float(np.sum(y * np.log(2.0) - 2.0 - gammaln(y + 1.0)))
        assert solution.loglik == pytest.approx(expected)

    def test_multinomial_probabilities_sum_to_one(self):
        eta = np.random.default_rng(14).standard_normal((10, 4))
        np.testing.assert_allclose(mean_response("multinomial", eta).sum(axis=1), 1.0)

    def test_one_hot(self):
        np.testing.assert_array_equal(one_hot(np.array([2, 0]), 3), [[0, 0, 1], [1, 0, 0]])
