"""Model-selection criteria and post-fit thresholding."""

import numpy as np

from models.selection import ThresholdMode


def ebic(loglik: float, s0: int, n_eff: float, p_model: int, gamma: float) -> float:
    """Extended BIC; equals the BIC at ``gamma = 0``.

    Args:
        loglik: Weighted log-likelihood of the fit.
        s0: Number of nonzero coefficients.
        n_eff: Effective sample size.
        p_model: Number of candidate coefficients.
        gamma: Extra penalty weight.

    Returns:
        float: ``-2 loglik + s0 log(n_eff) + 2 gamma s0 log(p_model)``.
    """
    return -2.0 * loglik + s0 * np.log(n_eff) + 2.0 * gamma * s0 * np.log(p_model)


def tau(s0: int, n_eff: float, p_model: int) -> float:
    """Threshold ``s0 * sqrt(log(p_model) / n_eff)``."""
    return s0 * float(np.sqrt(np.log(p_model) / n_eff))


def tau_threshold(coefs: np.ndarray, n_eff: float, p_model: int, mode: str = ThresholdMode.LW) -> np.ndarray:
    """Zero the coefficients smaller than tau in magnitude.

    The nonzero count of ``coefs`` stands in for the unknown true support
    size. Mode ``none`` returns the input unchanged.

    Args:
        coefs: Coefficients (any shape).
        n_eff: Effective sample size.
        p_model: Number of candidate coefficients.
        mode: ``lw`` or ``none``.

    Returns:
        np.ndarray: Thresholded copy.
    """
    coefs = np.array(coefs, dtype=float)
    if mode == ThresholdMode.NONE:
        return coefs
    threshold = tau(int(np.count_nonzero(coefs)), n_eff, p_model)
    coefs[np.abs(coefs) < threshold] = 0.0
    return coefs
