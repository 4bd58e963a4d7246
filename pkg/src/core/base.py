"""Base classes and utilities.

This module provides the estimator base classes shared by the stationary
and time-varying model fitters.
"""

from abc import ABC, abstractmethod
from typing import Any, Callable, Generic, List, Optional, Sequence, TypeVar

from joblib import Parallel, delayed
import structlog

from .config import Settings, get_settings

T = TypeVar("T")
R = TypeVar("R")
O = TypeVar("O")


class BaseEstimator(ABC):
    """Base estimator class.

    All estimators inherit from this class to share settings, logging and
    the per-node worker pool.
    """

    def __init__(
        self,
        name: Optional[str] = None,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        """Initialize the estimator.

        Args:
            name: Estimator name for logging.
            settings: Settings to use instead of the cached application settings.
            n_jobs: Worker threads; defaults to ``settings.threads``.
        """
        self.name = name or self.__class__.__name__
        self.settings = settings or get_settings()
        self.n_jobs = n_jobs if n_jobs is not None else self.settings.threads
        self.logger = structlog.get_logger(self.name)

    @abstractmethod
    def fit(self, data: Any) -> Any:
        """Fit the model to a dataset.

        Args:
            data: Dataset to fit.

        Returns:
            The fitted model.
        """

    def _map_nodes(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Apply ``fn`` to every item, possibly on several threads.

        Results come back in the order of ``items`` whatever the thread
        count, and every item must be computable independently.
        """
        if self.n_jobs == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        return Parallel(n_jobs=self.n_jobs, prefer="threads")(
            delayed(fn)(item) for item in items
        )


class ConfigurableEstimator(BaseEstimator, Generic[O]):
    """Estimator configured by an options object.

    Provides options injection and validation.
    """

    def __init__(
        self,
        options: O,
        name: Optional[str] = None,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        """Initialize the estimator with options.

        Args:
            options: Estimator options.
            name: Estimator name for logging.
            settings: Settings override.
            n_jobs: Worker threads override.
        """
        super().__init__(name, settings, n_jobs)
        self.options = options
        self._validate_options()

    def _validate_options(self) -> None:
        """Validate estimator options.

        Override this method to implement cross-field checks that the
        options model itself cannot express.
        """
