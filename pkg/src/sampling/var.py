"""Sequential sampling of mixed VAR models."""

from typing import Optional, Sequence

import numpy as np
import structlog
from scipy.special import softmax

from core.config import Settings, get_settings
from core.exceptions import SamplingError, ValidationError
from core.monitoring import monitor_function, track_sampler_sweeps
from models.factor import MvarModel, validate_mvar_model
from models.variables import Dataset, VariableKind

logger = structlog.get_logger(__name__)


def _lagged_potentials(model: MvarModel, history: np.ndarray, t: int, s: int) -> np.ndarray:
    """Threshold plus lagged effects on variable ``s`` at row ``t``."""
    coef = model.coefficients
    spec = model.specs[s]
    out = np.array(model.thresholds[s], dtype=float)
    for l, lag in enumerate(coef.lags):
        past = history[t - lag]
        for r, predictor in enumerate(model.specs):
            if predictor.is_categorical:
                out += coef.coefarray[s, r, : spec.levels, int(past[r]), l]
            else:
                out += coef.coefarray[s, r, : spec.levels, 0, l] * past[r]
    return out


def _draw(
    model: MvarModel,
    eta: np.ndarray,
    s: int,
    rng: np.random.Generator,
    settings: Settings,
) -> float:
    spec = model.specs[s]
    if spec.kind == VariableKind.CATEGORICAL:
        return float(rng.choice(spec.levels, p=softmax(eta)))
    if spec.kind == VariableKind.GAUSSIAN:
        value = eta[0] + model.sds[s] * rng.standard_normal()
    else:
        value = float(rng.poisson(np.exp(min(eta[0], settings.poisson_eta_clamp))))
    if not np.isfinite(value) or abs(value) > settings.divergence_bound:
        raise SamplingError(
            "non-normalizable specification suspected",
            details={"variable": s, "value": float(value)},
        )
    return value


def _check(model: MvarModel) -> None:
    violations = validate_mvar_model(model)
    if violations:
        raise ValidationError("invalid mVAR model", violations=violations)


def _sample_row(model: MvarModel, history: np.ndarray, t: int, rng, settings: Settings) -> None:
    warm = t < model.coefficients.max_lag
    for s in range(model.p):
        if warm:
            eta = np.array(model.thresholds[s], dtype=float)
        else:
            eta = _lagged_potentials(model, history, t, s)
        history[t, s] = _draw(model, eta, s, rng, settings)


@monitor_function("sampling")
def sample_mvar(
    model: MvarModel,
    n: int,
    seed: int = 1,
    settings: Optional[Settings] = None,
) -> Dataset:
    """Draw a series of ``n`` rows from a mixed VAR model.

    The first ``max(lags)`` rows come from the threshold-only marginals;
    every later row is drawn given the lagged rows. Gaussian means and
    poisson log-rates are the threshold plus the lagged effects of the raw
    values; categorical variables take a softmax over their potentials.

    Raises:
        ValidationError: Invalid model or ``n <= max(lags)``.
        SamplingError: A continuous variable diverged.
    """
    settings = settings or get_settings()
    _check(model)
    if n <= model.coefficients.max_lag:
        raise ValidationError(f"n = {n} must exceed the maximal lag {model.coefficients.max_lag}")
    rng = np.random.default_rng(seed)
    history = np.zeros((n, model.p))
    for t in range(n):
        _sample_row(model, history, t, rng, settings)
    track_sampler_sweeps("mvar", n)
    logger.info("mVAR sample drawn", n=n, p=model.p, lags=model.coefficients.lags, seed=seed)
    return Dataset(values=history, specs=model.specs)


@monitor_function("sampling")
def sample_tvmvar(
    models: Sequence[MvarModel],
    n: int,
    seed: int = 1,
    settings: Optional[Settings] = None,
) -> Dataset:
    """Draw row t of a series under the t-th mixed VAR model.

    Raises:
        ValidationError: ``len(models) != n`` or models disagree on variables or lags.
    """
    settings = settings or get_settings()
    if len(models) != n:
        raise ValidationError(f"expected {n} per-time-point models, got {len(models)}")
    first = models[0]
    if any(m.specs != first.specs or m.coefficients.lags != first.coefficients.lags for m in models):
        raise ValidationError("all per-time-point models must share variables and lags")
    for model in models:
        _check(model)
    if n <= first.coefficients.max_lag:
        raise ValidationError(f"n = {n} must exceed the maximal lag {first.coefficients.max_lag}")
    rng = np.random.default_rng(seed)
    history = np.zeros((n, first.p))
    for t, model in enumerate(models):
        _sample_row(model, history, t, rng, settings)
    track_sampler_sweeps("tvmvar", n)
    logger.info("Time-varying mVAR sample drawn", n=n, seed=seed)
    return Dataset(values=history, specs=first.specs)
