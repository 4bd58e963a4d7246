"""Monitoring and metrics collection.

This module provides Prometheus metrics collection and monitoring
functionality for estimation, sampling and the command line runs.
"""

import time
from functools import wraps
from pathlib import Path
from typing import Callable, Optional, Union

from prometheus_client import REGISTRY, Counter, Histogram, Info, write_to_textfile
import structlog

from .config import Settings

logger = structlog.get_logger(__name__)

node_regressions = Counter(
    "node_regressions_total",
    "Total number of nodewise regressions fitted",
    ["model", "family"]
)

solver_sweeps = Histogram(
    "solver_sweeps",
    "Coordinate-descent sweeps per penalized fit",
    ["family"],
    buckets=(1, 2, 5, 10, 25, 50, 100, 250, 1000, 10000, 100000),
)

estimation_duration = Histogram(
    "estimation_duration_seconds",
    "Model estimation duration in seconds",
    ["model"]
)

sampler_sweeps = Counter(
    "sampler_sweeps_total",
    "Total number of sampler sweeps",
    ["sampler"]
)

error_count = Counter(
    "errors_total",
    "Total number of errors",
    ["type", "component"]
)

app_info = Info(
    "app_info",
    "Application information"
)


def setup_monitoring(settings: Settings) -> None:
    """Setup monitoring and metrics collection.

    Args:
        settings: Application settings.
    """
    logger.debug("Setting up monitoring")
    app_info.info({
        "version": settings.app_version,
        "name": settings.app_name,
        "schema_version": settings.schema_version,
    })


def track_node_regression(model: str, family: str) -> None:
    """Count one fitted nodewise regression.

    Args:
        model: Model class (mgm, mvar, tvmgm, tvmvar).
        family: GLM family of the node.
    """
    node_regressions.labels(model=model, family=family).inc()


def track_solver_sweeps(family: str, sweeps: int) -> None:
    """Record the sweep count of one penalized fit."""
    solver_sweeps.labels(family=family).observe(sweeps)


def track_sampler_sweeps(sampler: str, sweeps: int) -> None:
    """Count sampler sweeps.

    Args:
        sampler: Sampler name.
        sweeps: Number of sweeps performed.
    """
    sampler_sweeps.labels(sampler=sampler).inc(sweeps)


def track_error(error_type: str, component: str) -> None:
    """Track error occurrence.

    Args:
        error_type: Type of error.
        component: Component where error occurred.
    """
    error_count.labels(type=error_type, component=component).inc()


def export_metrics(path: Union[str, Path]) -> None:
    """Write the default registry in Prometheus text format.

    Args:
        path: Destination file.
    """
    write_to_textfile(str(path), REGISTRY)
    logger.debug("Metrics exported", path=str(path))


def monitor_function(component: str):
    """Decorator to monitor function execution.

    Args:
        component: Component name for metrics.

    Returns:
        Callable: Decorated function.
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            except Exception as e:
                track_error(type(e).__name__, component)
                raise
            finally:
                duration = time.perf_counter() - start_time
                logger.debug(
                    "Function execution completed",
                    function=func.__name__,
                    component=component,
                    duration=f"{duration:.4f}s"
                )

        return wrapper

    return decorator


class MetricsCollector:
    """Metrics collection context manager.

    When ``model`` is given the elapsed time is also observed on the
    estimation duration histogram.
    """

    def __init__(self, operation: str, component: str, model: Optional[str] = None):
        """Initialize metrics collector.

        Args:
            operation: Operation name.
            component: Component name.
            model: Model class label for the duration histogram.
        """
        self.operation = operation
        self.component = component
        self.model = model
        self.start_time: Optional[float] = None
        self.duration: Optional[float] = None

    def __enter__(self):
        """Start timing."""
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """End timing and record metrics."""
        if self.start_time is None:
            return
        self.duration = time.perf_counter() - self.start_time

        if exc_type:
            track_error(exc_type.__name__, self.component)
            logger.error(
                "Operation failed",
                operation=self.operation,
                component=self.component,
                duration=f"{self.duration:.4f}s",
                error=str(exc_val),
            )
            return

        if self.model is not None:
            estimation_duration.labels(model=self.model).observe(self.duration)
        logger.debug(
            "Operation completed",
            operation=self.operation,
            component=self.component,
            duration=f"{self.duration:.4f}s",
        )
