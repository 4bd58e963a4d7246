"""Exact joint distribution of small all-categorical models by enumeration."""

from itertools import product

import numpy as np
from scipy.special import logsumexp

from core.exceptions import SamplingError, ValidationError
from models.factor import FactorModel, JointTable, validate_model

MAX_STATES = 1_000_000


def exact_joint_small(model: FactorModel) -> JointTable:
    """Probability of every joint state of an all-categorical model.

    States are enumerated in lexicographic order of the codes.

    Raises:
        ValidationError: Invalid model.
        SamplingError: A continuous variable, or more than a million states.
    """
    violations = validate_model(model)
    if violations:
        raise ValidationError("invalid factor model", violations=violations)
    if any(not spec.is_categorical for spec in model.specs):
        raise SamplingError("exact enumeration requires all variables to be categorical")
    levels = [spec.levels for spec in model.specs]
    if int(np.prod(levels)) > MAX_STATES:
        raise SamplingError(f"state space of {int(np.prod(levels))} exceeds {MAX_STATES}")

    states = np.array(list(product(*[range(m) for m in levels])), dtype=np.int64)
    energy = np.zeros(len(states))
    for s in range(model.p):
        energy += model.thresholds[s][states[:, s]]
    for members, array in zip(model.factors, model.interactions):
        energy += array[tuple(states[:, list(members)].T)]
    log_partition = float(logsumexp(energy))
    return JointTable(states=states, probabilities=np.exp(energy - log_partition), log_partition=log_partition)
