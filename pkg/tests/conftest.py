"""Shared fixtures: small settings, reference models and simulated data."""

import numpy as np
import pytest

from core.config import Settings
from models.factor import MvarCoefficients, MvarModel, pairwise_factor_model
from models.options import MgmOptions, MvarOptions
from models.selection import SelectionSpec
from models.variables import Dataset, VariableSpec

G = VariableSpec.gaussian()
C2 = VariableSpec.categorical(2)
C4 = VariableSpec.categorical(4)


@pytest.fixture
def settings() -> Settings:
    """Settings with short lambda paths and a single worker thread."""
    return Settings(n_lambda=20, threads=1, metrics_file=None, log_level="WARNING")


@pytest.fixture
def ebic_selection() -> SelectionSpec:
    return SelectionSpec(method="ebic", gamma=0.25, n_lambda=20)


@pytest.fixture
def mgm_reference_model():
    """Four-variable mixed model: gaussian, binary, 4-category, gaussian.

    True edges: 0-1 (gaussian-binary), 1-2 (binary-categorical) and 0-3
    (gaussian-gaussian).
    """
    pairs = {
        (0, 3): np.array([[0.5]]),
        (1, 2): np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]]),
        (0, 1): np.array([[1.0, 0.0]]),
    }
    return pairwise_factor_model([G, C2, C4, G], pairs)


@pytest.fixture
def mvar_reference_model() -> MvarModel:
    """Six-variable lag-1 mixed VAR with three true lagged effects.

    Effects: 5 -> 4 (gaussian on gaussian), 4 -> 0 (gaussian on binary)
    and 2 -> 0 (categorical on binary).
    """
    specs = [C2, C2, C4, C4, G, G]
    coef = np.zeros((6, 6, 4, 4, 1))
    coef[4, 5, 0, 0, 0] = 0.4
    coef[0, 4, 0:2, 0, 0] = [0.0, 1.0]
    coef[0, 2, 0, 0:4, 0] = [1.0, 1.0, 0.0, 0.0]
    coef[0, 2, 1, 0:4, 0] = [0.0, 0.0, 1.0, 1.0]
    return MvarModel(
        specs=specs,
        coefficients=MvarCoefficients(lags=[1], coefarray=coef),
        thresholds=[np.zeros(s.levels) for s in specs],
        sds=np.ones(6),
    )


@pytest.fixture
def gaussian_pair_data() -> Dataset:
    """Two correlated gaussian columns and one independent one."""
    rng = np.random.default_rng(7)
    x = rng.standard_normal(300)
    y = 0.8 * x + 0.6 * rng.standard_normal(300)
    z = rng.standard_normal(300)
    return Dataset(values=np.column_stack([x, y, z]), specs=[G, G, G], names=["x", "y", "z"])


@pytest.fixture
def mixed_data() -> Dataset:
    """Gaussian, binary and 3-category columns with a gaussian-binary dependency."""
    rng = np.random.default_rng(11)
    n = 240
    b = rng.integers(0, 2, n)
    g = 1.5 * b + rng.standard_normal(n)
    c = np.arange(n) % 3
    return Dataset(
        values=np.column_stack([g, b, c]),
        specs=[G, C2, VariableSpec.categorical(3)],
        names=["g", "b", "c"],
    )


@pytest.fixture
def mgm_options(ebic_selection) -> MgmOptions:
    return MgmOptions(k=2, selection=ebic_selection)


@pytest.fixture
def mvar_options(ebic_selection) -> MvarOptions:
    return MvarOptions(selection=ebic_selection)
