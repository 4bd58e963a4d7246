"""Tests for settings, exceptions, logging context and the estimator base."""

import threading

import pytest
import structlog

from core.base import BaseEstimator
from core.config import Settings, get_settings
from core.exceptions import ConfigurationError, DegenerateResponseError, EstimationError, ValidationError
from core.logging import RunContextProcessor, log_context
from core.monitoring import MetricsCollector, export_metrics, monitor_function
from main import run_cli


class _Squares(BaseEstimator):
    def fit(self, data):
        return self._map_nodes(lambda x: x * x, list(data))


class TestSettings:
    """Tests for configuration."""

    def test_defaults(self):
        settings = Settings(_env_file=None)
        assert settings.app_name == "mixgraph"
        assert settings.solver_tolerance == 1e-7
        assert settings.gibbs_burn_in == 100

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("MGM_N_LAMBDA", "30")
        monkeypatch.setenv("MGM_LOG_LEVEL", "debug")
        settings = Settings(_env_file=None)
        assert settings.n_lambda == 30
        assert settings.log_level == "DEBUG"

    @pytest.mark.parametrize("field, value", [("solver_tolerance", 0.0), ("threads", 0), ("log_format", "xml")])
    def test_invalid_values(self, field, value):
        with pytest.raises(ValueError):
            Settings(**{field: value})

    def test_invalid_environment(self, monkeypatch):
        monkeypatch.setenv("MGM_THREADS", "-5")
        get_settings.cache_clear()
        try:
            with pytest.raises(ConfigurationError, match="invalid settings"):
                get_settings()
            assert run_cli(["--help"]) == 1
        finally:
            get_settings.cache_clear()


class TestExceptions:
    """Tests for the exception hierarchy."""

    def test_estimation_error_location(self):
        error = EstimationError("solver failed", node=2, estpoint=5)
        assert str(error) == "estpoint 5, node 2: solver failed"
        assert error.message == "solver failed"

    def test_degenerate_is_estimation_error(self):
        assert isinstance(DegenerateResponseError("constant response", node=0), EstimationError)

    def test_violations(self):
        error = ValidationError("invalid model", violations=["a", "b"])
        assert error.violations == ["a", "b"]


class TestLogging:
    """Tests for log context handling."""

    def test_context_bound_inside_block(self):
        with log_context(model="mgm", node=3):
            inside = structlog.contextvars.get_contextvars()
        assert inside["model"] == "mgm" and inside["node"] == 3
        assert "node" not in structlog.contextvars.get_contextvars()

    def test_processor_orders_context_first(self):
        event = {"event": "Fitted", "lam": 0.1, "node": 2, "run_id": "abc"}
        ordered = RunContextProcessor()(None, "info", event)
        assert list(ordered)[:2] == ["run_id", "node"]

    def test_processor_without_context(self):
        event = {"event": "Fitted"}
        assert RunContextProcessor()(None, "info", event) == {"event": "Fitted"}


class TestBaseEstimator:
    """Tests for the per-node worker pool."""

    def test_results_in_item_order(self, settings):
        assert _Squares(settings=settings, n_jobs=4).fit(range(10)) == [x * x for x in range(10)]

    def test_serial_runs_in_calling_thread(self, settings):
        seen = []
        estimator = _Squares(settings=settings, n_jobs=1)
        estimator._map_nodes(lambda x: seen.append(threading.get_ident()), [1, 2])
        assert set(seen) == {threading.get_ident()}

    def test_thread_default_from_settings(self):
        assert _Squares(settings=Settings(threads=3)).n_jobs == 3


class TestMonitoring:
    """Tests for metrics helpers."""

    def test_collector_records_duration(self):
        with MetricsCollector("fit_mgm", "estimation", model="mgm") as collector:
            pass
        assert collector.duration is not None and collector.duration >= 0

    def test_monitor_function_reraises(self):
        @monitor_function("tests")
        def failing():
            raise ValueError("boom")

        with pytest.raises(ValueError, match="boom"):
            failing()

    def test_export(self, tmp_path):
        path = tmp_path / "metrics.prom"
        export_metrics(path)
        assert "node_regressions_total" in path.read_text()
