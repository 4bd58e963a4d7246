"""Response families: mean functions and pointwise log-likelihoods."""

from typing import Optional

import numpy as np
from scipy.special import gammaln, log_softmax, softmax

from models.glm import Family


def one_hot(codes: np.ndarray, n_classes: int) -> np.ndarray:
    """n x m indicator matrix of integer codes."""
    codes = np.asarray(codes).astype(np.int64)
    return (codes[:, None] == np.arange(n_classes)[None, :]).astype(float)


def linear_predictor(x: np.ndarray, coefficients: np.ndarray, intercepts: np.ndarray) -> np.ndarray:
    """n x K linear predictor."""
    return intercepts[None, :] + x @ coefficients


def mean_response(family: Family, eta: np.ndarray, eta_clamp: float = 30.0) -> np.ndarray:
    """Conditional mean: identity, clamped exp, or class probabilities."""
    if family == Family.GAUSSIAN:
        return eta[:, 0]
    if family == Family.POISSON:
        return np.exp(np.clip(eta[:, 0], -eta_clamp, eta_clamp))
    return softmax(eta, axis=1)


def pointwise_log_likelihood(
    family: Family,
    response: np.ndarray,
    eta: np.ndarray,
    residual_sd: Optional[float] = None,
    eta_clamp: float = 30.0,
) -> np.ndarray:
    """Log-likelihood contribution of every observation.

    Args:
        family: Response family.
        response: Observed responses (codes for multinomial).
        eta: n x K linear predictor.
        residual_sd: Gaussian sd (required for gaussian).
        eta_clamp: Bound on the poisson linear predictor.

    Returns:
        np.ndarray: Per-observation log-likelihood.
    """
    if family == Family.GAUSSIAN:
        sd = float(residual_sd)
        resid = response - eta[:, 0]
        return -0.5 * np.log(2.0 * np.pi) - np.log(sd) - 0.5 * (resid / sd) ** 2
    if family == Family.POISSON:
        eta0 = np.clip(eta[:, 0], -eta_clamp, eta_clamp)
        return response * eta0 - np.exp(eta0) - gammaln(response + 1.0)
    log_p = log_softmax(eta, axis=1)
    return log_p[np.arange(len(response)), response.astype(np.int64)]


def working_residual(family: Family, response: np.ndarray, eta: np.ndarray, n_classes: int) -> np.ndarray:
    """n x K residual ``y - E[y]`` whose design products give the NLL gradient."""
    if family == Family.MULTINOMIAL:
        return one_hot(response, n_classes) - softmax(eta, axis=1)
    return (response - mean_response(family, eta))[:, None]
