"""Weighted elastic-net GLM solver.

Cyclic coordinate descent in covariance mode on weighted-centered data,
with an active-set inner loop. Poisson and multinomial responses are
fitted by iteratively reweighted penalized least squares around the
current linear predictor; the multinomial model uses the symmetric
parameterization (one coefficient vector per class, no reference class)
and cycles through the classes.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from core.config import Settings, get_settings
from core.exceptions import DegenerateResponseError, EstimationError
from core.monitoring import track_solver_sweeps
from models.glm import Family, GlmProblem, GlmSolution

from .families import linear_predictor, one_hot, pointwise_log_likelihood, working_residual

logger = structlog.get_logger(__name__)

ALPHA_FLOOR = 1e-3
_ZERO_GRADIENT = 1e-12


def _soft_threshold(z: float, threshold: float) -> float:
    if z > threshold:
        return z - threshold
    if z < -threshold:
        return z + threshold
    return 0.0


def _penalized_wls(
    x: np.ndarray,
    z: np.ndarray,
    u: np.ndarray,
    l1: float,
    l2: float,
    beta: np.ndarray,
    tol: float,
    max_sweeps: int,
) -> Tuple[np.ndarray, float, int, bool]:
    """Minimize ``1/2 sum u (z - b0 - x b)^2 + l1 |b|_1 + l2/2 |b|^2``.

    Returns the coefficients, the intercept, the sweep count and whether
    the max coefficient change fell below ``tol``.
    """
    beta = np.array(beta, dtype=float)
    su = u.sum()
    xbar = u @ x / su
    zbar = float(u @ z / su)
    xc = x - xbar
    gram = xc.T @ (u[:, None] * xc)
    grad = xc.T @ (u * (z - zbar)) - gram @ beta
    diag = np.diag(gram).copy()

    def sweep(indices: Sequence[int]) -> float:
        max_delta = 0.0
        for j in indices:
            gjj = diag[j]
            if gjj <= 0.0:
                continue
            old = beta[j]
            new = _soft_threshold(grad[j] + gjj * old, l1) / (gjj + l2)
            if new != old:
                delta = new - old
                grad[:] -= gram[:, j] * delta
                beta[j] = new
                max_delta = max(max_delta, abs(delta))
        return max_delta

    everything = range(len(beta))
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        if sweep(everything) < tol:
            converged = True
            break
        active = np.flatnonzero(beta)
        while sweeps < max_sweeps:
            sweeps += 1
            if sweep(active) < tol:
                break
    return beta, zbar - float(xbar @ beta), sweeps, converged


def _check_degenerate(problem: GlmProblem) -> None:
    observed = problem.response[problem.obs_weights > 0]
    if problem.family == Family.MULTINOMIAL:
        if np.unique(observed).size < 2:
            raise DegenerateResponseError("degenerate response: a single category observed")
    elif np.ptp(observed) == 0:
        raise DegenerateResponseError("degenerate response: constant")


def null_gradient(problem: GlmProblem) -> np.ndarray:
    """q x K gradient of the weighted NLL at the intercept-only fit."""
    _check_degenerate(problem)
    v = problem.obs_weights / problem.obs_weights.sum()
    if problem.family == Family.MULTINOMIAL:
        y = one_hot(problem.response, problem.n_classes)
    else:
        y = problem.response[:, None]
    centered = y - v @ y
    return problem.x.T @ (v[:, None] * centered)


def lambda_max(problem: GlmProblem, alpha: Optional[float] = None) -> float:
    """Smallest penalty at which every coefficient is zero.

    Raises:
        DegenerateResponseError: Constant response or zero gradient.
    """
    alpha = problem.alpha if alpha is None else alpha
    value = float(np.max(np.abs(null_gradient(problem)))) / max(alpha, ALPHA_FLOOR)
    if value <= _ZERO_GRADIENT:
        raise DegenerateResponseError("zero lambda_max")
    return value


def lambda_path(
    problem: GlmProblem,
    n_lambda: Optional[int] = None,
    min_ratio: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Descending, log-equally spaced penalty sequence from lambda_max.

    Args:
        problem: Problem whose alpha sets the path.
        n_lambda: Path length (defaults to ``settings.n_lambda``).
        min_ratio: Ratio of the smallest to the largest penalty; defaults
            to 1e-4 when n_eff exceeds the column count, else 1e-2.
        settings: Settings override.

    Returns:
        np.ndarray: Penalty sequence.
    """
    settings = settings or get_settings()
    n_lambda = n_lambda or settings.n_lambda
    if n_lambda < 2:
        raise EstimationError("n_lambda must be at least 2")
    if min_ratio is None:
        min_ratio = 1e-4 if problem.n_eff > problem.design.q else 1e-2
    if not 0.0 < min_ratio < 1.0:
        raise EstimationError("min_ratio must lie in (0, 1)")
    top = lambda_max(problem)
    return np.geomspace(top, top * min_ratio, n_lambda)


def _fit_gaussian(problem, v, beta, settings):
    l1 = problem.lam * problem.alpha
    l2 = problem.lam * (1.0 - problem.alpha)
    beta, b0, sweeps, converged = _penalized_wls(
        problem.x, problem.response, v, l1, l2, beta[:, 0],
        settings.solver_tolerance, settings.solver_max_sweeps,
    )
    return beta[:, None], np.array([b0]), sweeps, converged, False


def _fit_poisson(problem, v, beta, b0, settings):
    l1 = problem.lam * problem.alpha
    l2 = problem.lam * (1.0 - problem.alpha)
    clamp = settings.poisson_eta_clamp
    beta = beta[:, 0].copy()
    b0 = float(b0[0])
    sweeps_total, clamped, converged = 0, False, False
    for _ in range(settings.irls_max_iter):
        eta = b0 + problem.x @ beta
        if np.any(np.abs(eta) > clamp):
            clamped = True
            eta = np.clip(eta, -clamp, clamp)
        mu = np.exp(eta)
        z = eta + (problem.response - mu) / mu
        new_beta, new_b0, sweeps, _ = _penalized_wls(
            problem.x, z, v * mu, l1, l2, beta,
            settings.solver_tolerance, settings.solver_max_sweeps,
        )
        sweeps_total += sweeps
        change = max(abs(new_b0 - b0), float(np.max(np.abs(new_beta - beta), initial=0.0)))
        beta, b0 = new_beta, new_b0
        if change < settings.solver_tolerance:
            converged = True
            break
    if clamped:
        logger.warning("Poisson linear predictor clamped", bound=clamp, lam=problem.lam)
    return beta[:, None], np.array([b0]), sweeps_total, converged, clamped


def _fit_multinomial(problem, v, coefficients, intercepts, settings):
    m = problem.n_classes
    l1 = problem.lam * problem.alpha
    l2 = problem.lam * (1.0 - problem.alpha)
    if problem.lam == 0.0:
        l2 += settings.multinomial_ridge
    floor = settings.probability_floor
    y = one_hot(problem.response, m)
    coefficients = coefficients.copy()
    intercepts = intercepts.copy()
    sweeps_total, converged = 0, False
    for _ in range(settings.irls_max_iter):
        max_change = 0.0
        for c in range(m):
            eta = linear_predictor(problem.x, coefficients, intercepts)
            eta -= eta.max(axis=1, keepdims=True)
            prob = np.exp(eta)
            prob /= prob.sum(axis=1, keepdims=True)
            pc = prob[:, c]
            wc = np.maximum(pc * (1.0 - pc), floor)
            z = (intercepts[c] + problem.x @ coefficients[:, c]) + (y[:, c] - pc) / wc
            new_beta, new_b0, sweeps, _ = _penalized_wls(
                problem.x, z, v * wc, l1, l2, coefficients[:, c],
                settings.solver_tolerance, settings.solver_max_sweeps,
            )
            sweeps_total += sweeps
            max_change = max(
                max_change,
                abs(new_b0 - intercepts[c]),
                float(np.max(np.abs(new_beta - coefficients[:, c]), initial=0.0)),
            )
            coefficients[:, c] = new_beta
            intercepts[c] = new_b0
        intercepts -= intercepts.mean()
        if max_change < settings.solver_tolerance:
            converged = True
            break
    return coefficients, intercepts, sweeps_total, converged, False


def _initial_intercepts(problem: GlmProblem, v: np.ndarray) -> np.ndarray:
    if problem.family == Family.GAUSSIAN:
        return np.array([float(v @ problem.response)])
    if problem.family == Family.POISSON:
        return np.array([np.log(max(float(v @ problem.response), 1e-10))])
    freq = np.maximum(v @ one_hot(problem.response, problem.n_classes), 1e-10)
    log_freq = np.log(freq)
    return log_freq - log_freq.mean()


def fit_glm(
    problem: GlmProblem,
    warm_start: Optional[GlmSolution] = None,
    settings: Optional[Settings] = None,
) -> GlmSolution:
    """Solve one penalized node regression.

    Args:
        problem: Problem at a fixed alpha and lambda.
        warm_start: Previous solution to start from.
        settings: Settings override.

    Returns:
        GlmSolution: Fitted coefficients. ``converged`` is False when the
        sweep or reweighting budget ran out; the last iterate is returned.
    """
    settings = settings or get_settings()
    v = problem.obs_weights / problem.obs_weights.sum()
    q, k = problem.design.q, problem.n_outputs
    if warm_start is not None and warm_start.coefficients.shape == (q, k):
        coefficients = np.array(warm_start.coefficients)
        intercepts = np.array(warm_start.intercepts)
    else:
        coefficients = np.zeros((q, k))
        intercepts = _initial_intercepts(problem, v)

    if problem.family == Family.GAUSSIAN:
        result = _fit_gaussian(problem, v, coefficients, settings)
    elif problem.family == Family.POISSON:
        result = _fit_poisson(problem, v, coefficients, intercepts, settings)
    else:
        result = _fit_multinomial(problem, v, coefficients, intercepts, settings)
    coefficients, intercepts, sweeps, converged, clamped = result
    track_solver_sweeps(str(problem.family), sweeps)
    if not converged:
        logger.warning("Solver did not converge", family=str(problem.family), lam=problem.lam, sweeps=sweeps)

    residual_sd = None
    if problem.family == Family.GAUSSIAN:
        resid = problem.response - linear_predictor(problem.x, coefficients, intercepts)[:, 0]
        residual_sd = max(float(np.sqrt(v @ resid**2)), settings.sd_floor)

    solution = GlmSolution(
        family=problem.family,
        coefficients=coefficients,
        intercepts=intercepts,
        lam=problem.lam,
        alpha=problem.alpha,
        loglik=0.0,
        converged=converged,
        residual_sd=residual_sd,
        n_sweeps=sweeps,
        clamped=clamped,
    )
    return solution.model_copy(update={"loglik": log_likelihood(solution, problem, settings)})


def fit_path(
    problem: GlmProblem,
    alpha: float,
    lambdas: Sequence[float],
    settings: Optional[Settings] = None,
) -> List[GlmSolution]:
    """Fit a strictly descending penalty sequence with warm starts.

    Raises:
        EstimationError: Empty or non-descending sequence.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise EstimationError("empty lambda sequence")
    if np.any(np.diff(lambdas) >= 0):
        raise EstimationError("lambdas must be strictly descending")
    solutions: List[GlmSolution] = []
    previous = None
    for lam in lambdas:
        current = problem.model_copy(update={"alpha": float(alpha), "lam": float(lam)})
        previous = fit_glm(current, warm_start=previous, settings=settings)
        solutions.append(previous)
    return solutions


def log_likelihood(
    solution: GlmSolution,
    problem: GlmProblem,
    settings: Optional[Settings] = None,
    x: Optional[np.ndarray] = None,
) -> float:
    """Weighted log-likelihood of a solution on the problem's data.

    Gaussian residual sds below the floor are floored.
    """
    settings = settings or get_settings()
    eta = linear_predictor(problem.x if x is None else x, solution.coefficients, solution.intercepts)
    sd = None
    if solution.family == Family.GAUSSIAN:
        sd = max(solution.residual_sd or 0.0, settings.sd_floor)
    contributions = pointwise_log_likelihood(
        solution.family, problem.response, eta, sd, settings.poisson_eta_clamp
    )
    return float(problem.obs_weights @ contributions)


def kkt_violation(solution: GlmSolution, problem: GlmProblem) -> float:
    """Largest violation of the elastic-net optimality conditions."""
    v = problem.obs_weights / problem.obs_weights.sum()
    eta = linear_predictor(problem.x, solution.coefficients, solution.intercepts)
    residual = working_residual(problem.family, problem.response, eta, problem.n_classes)
    grad = problem.x.T @ (v[:, None] * residual)
    l1 = solution.lam * solution.alpha
    l2 = solution.lam * (1.0 - solution.alpha)
    theta = solution.coefficients
    active = theta != 0
    violation = np.where(
        active,
        np.abs(grad - l2 * theta - l1 * np.sign(theta)),
        np.maximum(np.abs(grad) - l1, 0.0),
    )
    return float(violation.max(initial=0.0))
