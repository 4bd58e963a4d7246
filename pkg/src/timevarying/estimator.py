"""Time-varying MGM and mVAR estimation by kernel-weighted nodewise regression.

The stationary estimator runs once per estimation point with every row
weighted by its kernel weight. Designs do not depend on the weights, so
they are built once and reused across points.
"""

from abc import abstractmethod
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.base import BaseEstimator
from core.config import Settings
from core.exceptions import EstimationError, ValidationError
from core.logging import log_context
from core.monitoring import MetricsCollector
from estimation.mgm import MgmEstimator, check_binary_coding, observation_weights
from estimation.mvar import MvarEstimator
from models.fits import MgmFit, MvarFit, TvFit
from models.options import MgmOptions, MvarOptions
from models.variables import Dataset

from .kernel import kernel_weights, normalize_timepoints, resolve_estpoints

EstpointsArg = Union[int, Sequence[float]]


class TvEstimator(BaseEstimator):
    """Shared estimation-point loop of the time-varying estimators."""

    model_label = "tv"

    def __init__(
        self,
        estpoints: EstpointsArg,
        bandwidth: float,
        name: Optional[str] = None,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        super().__init__(name, settings, n_jobs)
        if bandwidth <= 0:
            raise ValidationError(f"bandwidth must be positive, got {bandwidth}")
        self.estpoints = estpoints
        self.bandwidth = float(bandwidth)

    @abstractmethod
    def _stationary(self) -> Any:
        """Stationary estimator used at every estimation point."""

    @abstractmethod
    def _prepare(self, estimator: Any, data: Dataset) -> Tuple[Any, ...]:
        """Weight-free preparation: (scaling, designs, response mask)."""

    @abstractmethod
    def _fit_point(
        self,
        estimator: Any,
        data: Dataset,
        prepared: Tuple[Any, ...],
        weights: np.ndarray,
        zero_reason: Optional[str],
    ) -> Union[MgmFit, MvarFit]:
        """Stationary fit under one set of row weights."""

    def fit(
        self,
        data: Dataset,
        weights: Optional[Sequence[float]] = None,
        estpoints: Optional[EstpointsArg] = None,
    ) -> TvFit:
        """Estimate the model at every estimation point.

        Args:
            data: Dataset; ``timepoints`` place rows in time when given.
            weights: Optional observation weights multiplied into the kernel
                weights (zero drops a row).
            estpoints: Overrides the estimation points given at construction.

        Returns:
            TvFit: One stationary fit and local sample size per point.

        Raises:
            EstimationError: A node regression failed, with the estimation
                point and node attached.
        """
        times = normalize_timepoints(data)
        points = resolve_estpoints(self.estpoints if estpoints is None else estpoints, data)
        base = observation_weights(weights, data.n)
        estimator = self._stationary()
        if getattr(estimator.options, "binary_sign", False):
            check_binary_coding(data)

        fits: List[Union[MgmFit, MvarFit]] = []
        local_n: List[float] = []
        point_warnings: List[Optional[str]] = []
        with MetricsCollector(f"fit_{self.model_label}", "estimation", model=self.model_label):
            prepared = self._prepare(estimator, data)
            response_mask = prepared[-1]
            for e, t_e in enumerate(points):
                w = kernel_weights(times, t_e, self.bandwidth).weights * base
                n_local = float(w[response_mask].sum())
                reason = None
                if n_local < 2 or np.count_nonzero(w[response_mask] > 0) < 2:
                    reason = f"insufficient local data at estimation point {e} (local_n = {n_local:.4g})"
                    self.logger.warning("Zero fit at estimation point", estpoint=e, t_e=float(t_e), local_n=n_local)
                try:
                    with log_context(estpoint=e):
                        fits.append(self._fit_point(estimator, data, prepared, w, reason))
                except EstimationError as err:
                    raise EstimationError(
                        err.message, node=err.node, estpoint=e, details=err.details, cause=err
                    ) from err
                local_n.append(n_local)
                point_warnings.append(reason)

        self.logger.info(
            "Time-varying model estimated",
            model=self.model_label,
            estpoints=len(points),
            bandwidth=self.bandwidth,
            zero_points=sum(r is not None for r in point_warnings),
        )
        return TvFit(
            model_type=self.model_label,
            estpoints=points,
            bandwidth=self.bandwidth,
            fits=fits,
            local_n=np.array(local_n),
            point_warnings=point_warnings,
        )


class TvMgmEstimator(TvEstimator):
    """Kernel-smoothed k-order MGM estimator."""

    model_label = "tvmgm"

    def __init__(
        self,
        options: MgmOptions,
        estpoints: EstpointsArg,
        bandwidth: float,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        super().__init__(estpoints, bandwidth, settings=settings, n_jobs=n_jobs)
        self.options = options

    def _stationary(self) -> MgmEstimator:
        return MgmEstimator(self.options, settings=self.settings, n_jobs=self.n_jobs)

    def _prepare(self, estimator: MgmEstimator, data: Dataset) -> Tuple[Any, ...]:
        scaling, designs = estimator.prepare(data)
        return scaling, designs, np.ones(data.n, dtype=bool)

    def _fit_point(self, estimator, data, prepared, weights, zero_reason) -> MgmFit:
        scaling, designs, _ = prepared
        return estimator.fit_prepared(data, scaling, designs, weights, self.model_label, zero_reason)


class TvMvarEstimator(TvEstimator):
    """Kernel-smoothed mixed VAR estimator; weights follow the response row's time."""

    model_label = "tvmvar"

    def __init__(
        self,
        lags: Sequence[int],
        options: MvarOptions,
        estpoints: EstpointsArg,
        bandwidth: float,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        super().__init__(estpoints, bandwidth, settings=settings, n_jobs=n_jobs)
        self.lags = list(lags)
        self.options = options

    def _stationary(self) -> MvarEstimator:
        return MvarEstimator(self.lags, self.options, settings=self.settings, n_jobs=self.n_jobs)

    def _prepare(self, estimator: MvarEstimator, data: Dataset) -> Tuple[Any, ...]:
        return estimator.prepare(data)

    def _fit_point(self, estimator, data, prepared, weights, zero_reason) -> MvarFit:
        scaling, designs, mask = prepared
        return estimator.fit_prepared(data, scaling, designs, mask, weights, self.model_label, zero_reason)


def fit_tvmgm(
    data: Dataset,
    options: Optional[MgmOptions],
    estpoints: EstpointsArg,
    bandwidth: float,
    weights: Optional[Sequence[float]] = None,
    settings: Optional[Settings] = None,
    n_jobs: Optional[int] = None,
) -> TvFit:
    """Estimate a time-varying MGM (see ``TvEstimator.fit``)."""
    estimator = TvMgmEstimator(options or MgmOptions(), estpoints, bandwidth, settings, n_jobs)
    return estimator.fit(data, weights)


def fit_tvmvar(
    data: Dataset,
    lags: Sequence[int],
    options: Optional[MvarOptions],
    estpoints: EstpointsArg,
    bandwidth: float,
    weights: Optional[Sequence[float]] = None,
    settings: Optional[Settings] = None,
    n_jobs: Optional[int] = None,
) -> TvFit:
    """Estimate a time-varying mixed VAR model (see ``TvEstimator.fit``)."""
    estimator = TvMvarEstimator(lags, options or MvarOptions(), estpoints, bandwidth, settings, n_jobs)
    return estimator.fit(data, weights)
