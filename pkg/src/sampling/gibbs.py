"""Gibbs sampling of mixed graphical models.

Every variable is redrawn in turn from its node-conditional: normal for
gaussian, poisson for counts and a softmax over category potentials for
categorical variables. The potential of a factor for a variable is its
interaction array indexed by the current categories of the other members
and multiplied by the sufficient statistics of continuous members.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.special import softmax

from core.config import Settings, get_settings
from core.exceptions import SamplingError, ValidationError
from core.monitoring import monitor_function, track_sampler_sweeps
from models.factor import FactorModel, validate_model
from models.variables import Dataset, VariableKind

logger = structlog.get_logger(__name__)

_Term = Tuple[np.ndarray, Tuple[int, ...]]


class GibbsSampler:
    """Systematic-scan Gibbs sampler over one factor model."""

    def __init__(self, model: FactorModel, rng: np.random.Generator, settings: Settings) -> None:
        self.model = model
        self.rng = rng
        self.eta_clamp = settings.poisson_eta_clamp
        self.bound = settings.divergence_bound
        self.kinds = [spec.kind for spec in model.specs]
        self.levels = [spec.levels for spec in model.specs]
        self.terms: List[List[_Term]] = [[] for _ in model.specs]
        for members, array in zip(model.factors, model.interactions):
            for s in members:
                self.terms[s].append((array, members))

    def initial_state(self) -> np.ndarray:
        """Start at the threshold-only conditional means (random categories)."""
        state = np.zeros(self.model.p)
        for s, kind in enumerate(self.kinds):
            theta = self.model.thresholds[s]
            if kind == VariableKind.CATEGORICAL:
                state[s] = self.rng.integers(self.levels[s])
            elif kind == VariableKind.GAUSSIAN:
                state[s] = self.model.sds[s] * theta[0]
            else:
                state[s] = np.round(np.exp(min(theta[0], self.eta_clamp)))
        return state

    def _statistic(self, state: np.ndarray, r: int) -> float:
        if self.kinds[r] == VariableKind.GAUSSIAN:
            return state[r] / self.model.sds[r]
        return state[r]

    def potentials(self, state: np.ndarray, s: int) -> np.ndarray:
        """Natural parameter of variable ``s`` per category given the others."""
        out = np.array(self.model.thresholds[s], dtype=float)
        for array, members in self.terms[s]:
            index = []
            scale = 1.0
            for r in members:
                if r == s:
                    index.append(slice(None))
                elif self.kinds[r] == VariableKind.CATEGORICAL:
                    index.append(int(state[r]))
                else:
                    index.append(0)
                    scale *= self._statistic(state, r)
            out += scale * array[tuple(index)]
        return out

    def update(self, state: np.ndarray, s: int) -> None:
        """Redraw variable ``s`` in place."""
        eta = self.potentials(state, s)
        kind = self.kinds[s]
        if kind == VariableKind.CATEGORICAL:
            state[s] = self.rng.choice(self.levels[s], p=softmax(eta))
            return
        if kind == VariableKind.GAUSSIAN:
            sd = self.model.sds[s]
            value = sd * eta[0] + sd * self.rng.standard_normal()
        else:
            value = float(self.rng.poisson(np.exp(min(eta[0], self.eta_clamp))))
        if not np.isfinite(value) or abs(value) > self.bound:
            raise SamplingError(
                "non-normalizable specification suspected",
                details={"variable": s, "value": float(value)},
            )
        state[s] = value

    def sweep(self, state: np.ndarray) -> None:
        for s in range(self.model.p):
            self.update(state, s)


def _check(model: FactorModel) -> None:
    violations = validate_model(model)
    if violations:
        raise ValidationError("invalid factor model", violations=violations)


@monitor_function("sampling")
def sample_mgm(
    model: FactorModel,
    n: int,
    seed: int = 1,
    burn_in: Optional[int] = None,
    thin: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> Dataset:
    """Draw ``n`` rows from a mixed graphical model.

    Args:
        model: Valid factor model.
        n: Rows to keep.
        seed: Random seed; equal seeds give identical datasets.
        burn_in: Discarded initial sweeps (settings default 100).
        thin: Sweeps per kept row (settings default 10).
        settings: Settings override.

    Raises:
        ValidationError: Invalid model or arguments.
        SamplingError: A continuous variable diverged.
    """
    settings = settings or get_settings()
    burn_in = settings.gibbs_burn_in if burn_in is None else burn_in
    thin = settings.gibbs_thin if thin is None else thin
    if n < 2 or burn_in < 0 or thin < 1:
        raise ValidationError("need n >= 2, burn_in >= 0 and thin >= 1")
    _check(model)

    sampler = GibbsSampler(model, np.random.default_rng(seed), settings)
    state = sampler.initial_state()
    for _ in range(burn_in):
        sampler.sweep(state)
    rows = np.zeros((n, model.p))
    for i in range(n):
        for _ in range(thin):
            sampler.sweep(state)
        rows[i] = state
    track_sampler_sweeps("mgm", burn_in + n * thin)
    logger.info("MGM sample drawn", n=n, p=model.p, seed=seed, burn_in=burn_in, thin=thin)
    return Dataset(values=rows, specs=model.specs)


@monitor_function("sampling")
def sample_tvmgm(
    models: Sequence[FactorModel],
    n: int,
    seed: int = 1,
    burn_in: Optional[int] = None,
    sweeps_per_row: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> Dataset:
    """Draw row t from the t-th model of a time-varying MGM.

    One chain runs throughout; after burn-in under the first model it
    performs ``sweeps_per_row`` sweeps under model t before emitting row t.

    Raises:
        ValidationError: ``len(models) != n``, or models differ in variables.
    """
    settings = settings or get_settings()
    burn_in = settings.gibbs_burn_in if burn_in is None else burn_in
    sweeps_per_row = settings.tv_gibbs_sweeps if sweeps_per_row is None else sweeps_per_row
    if len(models) != n:
        raise ValidationError(f"expected {n} per-time-point models, got {len(models)}")
    if any(m.specs != models[0].specs for m in models):
        raise ValidationError("all per-time-point models must share the variable specs")
    for model in models:
        _check(model)

    rng = np.random.default_rng(seed)
    sampler = GibbsSampler(models[0], rng, settings)
    state = sampler.initial_state()
    for _ in range(burn_in):
        sampler.sweep(state)
    rows = np.zeros((n, models[0].p))
    for t, model in enumerate(models):
        sampler = GibbsSampler(model, rng, settings)
        for _ in range(sweeps_per_row):
            sampler.sweep(state)
        rows[t] = state
    track_sampler_sweeps("tvmgm", burn_in + n * sweeps_per_row)
    logger.info("Time-varying MGM sample drawn", n=n, seed=seed, sweeps_per_row=sweeps_per_row)
    return Dataset(values=rows, specs=models[0].specs)
