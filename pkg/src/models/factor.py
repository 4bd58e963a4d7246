"""Model specification types.

``FactorModel`` parameterizes a k-order mixed graphical model through its
thresholds, gaussian scales and interaction arrays. ``MvarModel`` bundles
the lagged coefficient array of a mixed VAR model with its thresholds and
scales. Both are the inputs of the samplers.

Indices are 0-based everywhere. The sufficient statistic of a variable is
``x / sd`` for gaussian variables, the raw count for poisson variables and
the category indicators for categorical variables.
"""

from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator
import structlog

from .common import BaseModel, FloatArray, IntArray
from .variables import VariableKind, VariableSpec

logger = structlog.get_logger(__name__)


class FactorModel(BaseModel):
    """Parameters of a k-order mixed graphical model.

    ``factors`` and ``interactions`` are parallel lists: the array at
    position i has one axis per member of ``factors[i]`` with the length of
    that member's levels.
    """

    specs: List[VariableSpec] = Field(..., description="One spec per variable")
    thresholds: List[FloatArray] = Field(..., description="Per-variable thresholds, one per level")
    sds: FloatArray = Field(..., description="Per-variable gaussian scale")
    factors: List[Tuple[int, ...]] = Field(default_factory=list, description="Member index tuples")
    interactions: List[FloatArray] = Field(default_factory=list, description="One array per factor")

    @property
    def p(self) -> int:
        return len(self.specs)

    @property
    def max_order(self) -> int:
        return max((len(f) for f in self.factors), default=1)

    def factors_of_order(self, d: int) -> List[Tuple[int, ...]]:
        """Factor tuples of order ``d``."""
        return [f for f in self.factors if len(f) == d]

    def interaction(self, members: Tuple[int, ...]) -> np.ndarray:
        """Interaction array of the factor with the given members."""
        return self.interactions[self.factors.index(tuple(members))]


class MvarCoefficients(BaseModel):
    """Lagged effects of a mixed VAR model.

    ``coefarray[s, r, cs, cr, l]`` is the effect of category ``cr`` of
    predictor ``r`` at lag ``lags[l]`` on category ``cs`` of target ``s``.
    Continuous variables use category index 0.
    """

    lags: List[int] = Field(..., min_length=1, description="Sorted positive lags")
    coefarray: FloatArray = Field(..., description="p x p x maxlevel x maxlevel x |L| array")

    @field_validator("lags")
    @classmethod
    def check_lags(cls, v: List[int]) -> List[int]:
        if any(lag < 1 for lag in v):
            raise ValueError("lags must be positive integers")
        if list(v) != sorted(set(v)):
            raise ValueError("lags must be sorted and distinct")
        return v

    @field_validator("coefarray")
    @classmethod
    def check_rank(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 5:
            raise ValueError("coefarray must be five-dimensional")
        return v

    @property
    def max_lag(self) -> int:
        return max(self.lags)


class MvarModel(BaseModel):
    """Specification of a mixed VAR model for sampling."""

    specs: List[VariableSpec] = Field(..., description="One spec per variable")
    coefficients: MvarCoefficients = Field(..., description="Lagged effects")
    thresholds: List[FloatArray] = Field(..., description="Per-variable thresholds, one per level")
    sds: FloatArray = Field(..., description="Per-variable gaussian scale")

    @property
    def p(self) -> int:
        return len(self.specs)


def _check_node_parameters(specs: List[VariableSpec], thresholds: List[np.ndarray], sds: np.ndarray) -> List[str]:
    violations = []
    p = len(specs)
    if len(thresholds) != p:
        violations.append(f"thresholds: {len(thresholds)} entries for {p} variables")
    if sds.shape != (p,):
        violations.append(f"sds: shape {sds.shape}, expected ({p},)")
    for s, spec in enumerate(specs):
        if s < len(thresholds) and thresholds[s].shape != (spec.levels,):
            violations.append(
                f"thresholds[{s}]: shape mismatch {thresholds[s].shape} for {spec.levels} levels"
            )
        if sds.shape == (p,) and spec.kind == VariableKind.GAUSSIAN and not sds[s] > 0:
            violations.append(f"sds[{s}]: gaussian scale must be positive")
    return violations


def validate_model(model: FactorModel) -> List[str]:
    """Return every invariant violation of a factor model.

    An empty list means the model is valid. Gaussian pairs whose
    interaction magnitude reaches the product of the two precisions are
    logged as a divergence warning but not reported as violations.

    Args:
        model: Model to check.

    Returns:
        List[str]: Violation messages.
    """
    violations = _check_node_parameters(model.specs, model.thresholds, model.sds)
    p = model.p
    if len(model.factors) != len(model.interactions):
        violations.append(
            f"{len(model.factors)} factors but {len(model.interactions)} interaction arrays"
        )
    seen = set()
    for members, array in zip(model.factors, model.interactions):
        label = "(" + ",".join(str(m) for m in members) + ")"
        if len(members) < 2:
            violations.append(f"factor {label}: order must be at least 2")
        if len(set(members)) != len(members):
            violations.append(f"factor {label}: duplicate index")
            continue
        if list(members) != sorted(members):
            violations.append(f"factor {label}: indices must be sorted")
        if any(m < 0 or m >= p for m in members):
            violations.append(f"factor {label}: index out of range")
            continue
        if tuple(members) in seen:
            violations.append(f"factor {label}: listed twice")
        seen.add(tuple(members))
        expected = tuple(model.specs[m].levels for m in members)
        if array.shape != expected:
            violations.append(f"factor {label}: shape mismatch {array.shape}, expected {expected}")
            continue
        if not np.all(np.isfinite(array)):
            violations.append(f"factor {label}: non-finite parameters")
        if len(members) == 2 and model.sds.shape == (p,) and all(
            model.specs[m].kind == VariableKind.GAUSSIAN for m in members
        ):
            a, b = members
            precisions = 1.0 / (model.sds[a] ** 2 * model.sds[b] ** 2)
            if abs(float(array.flat[0])) >= precisions:
                logger.warning(
                    "Gaussian interaction may make the joint density non-normalizable",
                    factor=label,
                    magnitude=float(abs(array.flat[0])),
                    precision_product=float(precisions),
                )
    return violations


def validate_mvar_model(model: MvarModel) -> List[str]:
    """Return every invariant violation of a mixed VAR specification."""
    violations = _check_node_parameters(model.specs, model.thresholds, model.sds)
    p = model.p
    coef = model.coefficients.coefarray
    max_level = max(spec.levels for spec in model.specs)
    expected = (p, p, max_level, max_level, len(model.coefficients.lags))
    if coef.shape[:2] != (p, p) or coef.shape[4] != expected[4] or min(coef.shape[2:4]) < max_level:
        violations.append(f"coefarray: shape {coef.shape}, expected {expected}")
        return violations
    for s, target in enumerate(model.specs):
        for r, predictor in enumerate(model.specs):
            block = np.array(coef[s, r])
            block[: target.levels, : predictor.levels, :] = 0.0
            if np.any(block != 0):
                violations.append(f"coefarray[{s}, {r}]: nonzero entries outside the level range")
    if not np.all(np.isfinite(coef)):
        violations.append("coefarray: non-finite parameters")
    return violations


def pairwise_factor_model(
    specs: List[VariableSpec],
    pairs: Dict[Tuple[int, int], np.ndarray],
    thresholds: Optional[List[np.ndarray]] = None,
    sds: Optional[np.ndarray] = None,
) -> FactorModel:
    """Build a pairwise model with zero thresholds and unit scales by default.

    Keys given in descending order have their array transposed so that
    axes follow the sorted member order.
    """
    thresholds = thresholds if thresholds is not None else [np.zeros(s.levels) for s in specs]
    sds = sds if sds is not None else np.ones(len(specs))
    oriented = {}
    for (a, b), array in pairs.items():
        array = np.atleast_2d(np.asarray(array, dtype=float))
        oriented[(a, b) if a < b else (b, a)] = array if a < b else array.T
    factors = sorted(oriented)
    return FactorModel(
        specs=specs,
        thresholds=thresholds,
        sds=sds,
        factors=factors,
        interactions=[oriented[f] for f in factors],
    )


def all_subsets(items: List[int], max_size: int) -> List[Tuple[int, ...]]:
    """All subsets of ``items`` with 1..max_size elements, by size then lexicographically."""
    return [c for d in range(1, max_size + 1) for c in combinations(items, d)]


class JointTable(BaseModel):
    """Exact joint distribution of an all-categorical model."""

    states: IntArray = Field(..., description="One row per joint state, codes per variable")
    probabilities: FloatArray = Field(..., description="Probability of each state")
    log_partition: float = Field(..., description="Log normalizing constant")

    def probability(self, state: Tuple[int, ...]) -> float:
        """Probability of one joint state."""
        match = np.all(self.states == np.asarray(state)[None, :], axis=1)
        return float(self.probabilities[match][0])
