"""Weighted elastic-net GLM solver."""

from .solver import fit_glm, fit_path, kkt_violation, lambda_max, lambda_path, log_likelihood

__all__ = ["fit_glm", "fit_path", "kkt_violation", "lambda_max", "lambda_path", "log_likelihood"]
