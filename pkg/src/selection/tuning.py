"""Lambda and alpha selection by EBIC or cross-validation."""

from typing import Optional, Sequence

import numpy as np
import structlog

from core.config import Settings, get_settings
from core.exceptions import EstimationError, ValidationError
from models.glm import GlmProblem
from models.selection import AlphaSelection, LambdaSelection, SelectionMethod, SelectionSpec
from solver.families import linear_predictor, pointwise_log_likelihood
from solver.solver import fit_path, lambda_path

from .criteria import ebic

logger = structlog.get_logger(__name__)


def assign_folds(n: int, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Balanced random fold labels for ``n`` observations.

    Raises:
        EstimationError: Some fold would hold fewer than 2 observations.
    """
    labels = rng.permutation(np.arange(n) % folds)
    if np.bincount(labels, minlength=folds).min() < 2:
        raise EstimationError(f"cross-validation with {folds} folds leaves a fold with fewer than 2 observations")
    return labels


def _cv_criteria(
    problem: GlmProblem,
    lambdas: np.ndarray,
    spec: SelectionSpec,
    stream: int,
    settings: Settings,
) -> np.ndarray:
    weights = problem.obs_weights
    positive = np.flatnonzero(weights > 0)
    labels = assign_folds(len(positive), spec.folds, np.random.default_rng([spec.seed, stream]))
    eta_clamp = settings.poisson_eta_clamp
    errors = np.zeros((spec.folds, len(lambdas)))
    for fold in range(spec.folds):
        test = positive[labels == fold]
        train_weights = np.array(weights)
        train_weights[test] = 0.0
        solutions = fit_path(problem.with_weights(train_weights), problem.alpha, lambdas, settings)
        x_test = problem.x[test]
        y_test = problem.response[test]
        w_test = weights[test]
        for i, solution in enumerate(solutions):
            eta = linear_predictor(x_test, solution.coefficients, solution.intercepts)
            sd = max(solution.residual_sd, settings.sd_floor) if solution.residual_sd is not None else None
            ll = pointwise_log_likelihood(problem.family, y_test, eta, sd, eta_clamp)
            errors[fold, i] = -float(w_test @ ll) / float(w_test.sum())
    return errors.mean(axis=0)


def select_lambda(
    problem: GlmProblem,
    lambdas: Sequence[float],
    spec: SelectionSpec,
    stream: int = 0,
    settings: Optional[Settings] = None,
) -> LambdaSelection:
    """Choose a penalty from a descending path.

    EBIC mode scores every full-data fit with ``p_model`` equal to the
    number of design columns. CV mode assigns the positively weighted
    observations to folds at random (seeded by ``spec.seed`` and
    ``stream``) and averages the out-of-fold negative log-likelihood.
    Ties go to the larger penalty.

    Args:
        problem: Problem at the alpha to search.
        lambdas: Descending penalty sequence.
        spec: Selection settings.
        stream: Extra seed component, typically the node index.
        settings: Settings override.

    Returns:
        LambdaSelection: Chosen index, per-lambda criteria and the full-data fit.
    """
    settings = settings or get_settings()
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise EstimationError("empty lambda path")
    solutions = fit_path(problem, problem.alpha, lambdas, settings)
    if spec.method == SelectionMethod.EBIC:
        criteria = np.array([
            ebic(s.loglik, s.s0, problem.n_eff, problem.design.q, spec.gamma) for s in solutions
        ])
    else:
        criteria = _cv_criteria(problem, lambdas, spec, stream, settings)
    index = int(np.argmin(criteria))
    return LambdaSelection(index=index, lambdas=lambdas, criteria=criteria, solution=solutions[index])


def select_alpha(
    problem: GlmProblem,
    spec: SelectionSpec,
    stream: int = 0,
    settings: Optional[Settings] = None,
) -> AlphaSelection:
    """Choose alpha (and lambda at that alpha).

    Alphas are searched from largest to smallest and only a strictly
    better criterion replaces the incumbent, so ties favour the larger,
    sparser alpha.

    Raises:
        ValidationError: Empty alpha sequence.
    """
    settings = settings or get_settings()
    if not spec.alpha_seq:
        raise ValidationError("alpha_seq must not be empty")
    alphas = sorted(set(spec.alpha_seq), reverse=True)
    best: Optional[LambdaSelection] = None
    best_alpha = alphas[0]
    criteria = []
    for alpha in alphas:
        at_alpha = problem.model_copy(update={"alpha": float(alpha)})
        lambdas = lambda_path(at_alpha, spec.n_lambda, spec.min_ratio, settings)
        selection = select_lambda(at_alpha, lambdas, spec, stream, settings)
        criteria.append(selection.criterion)
        if best is None or selection.criterion < best.criterion:
            best, best_alpha = selection, alpha
    logger.debug("Alpha selected", alpha=best_alpha, criterion=best.criterion)
    return AlphaSelection(alpha=float(best_alpha), selection=best, alphas=alphas, criteria=criteria)
