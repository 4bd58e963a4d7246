"""Application configuration management.

This module provides configuration management using Pydantic settings
with environment variable support. Every tuning constant used by the
solver, the samplers and the command line surface is read from here, so a
run can be adjusted through ``MGM_*`` environment variables or a ``.env``
file without touching code.
"""

from functools import lru_cache
from typing import Optional

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigurationError


class Settings(BaseSettings):
    """Application settings.

    All settings can be overridden using environment variables prefixed
    with ``MGM_`` (for example ``MGM_SOLVER_TOLERANCE=1e-8``).
    """

    model_config = SettingsConfigDict(
        env_prefix="MGM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(default="mixgraph", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    schema_version: str = Field(default="1.0", description="Version written into fit documents")

    # Logging settings
    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(default="text", description="Log format (json or text)")
    log_file: Optional[str] = Field(default=None, description="Log file path")
    log_max_size: str = Field(default="10MB", description="Maximum log file size")
    log_backup_count: int = Field(default=5, description="Number of backup log files")

    # Solver settings
    solver_tolerance: float = Field(
        default=1e-7, description="Max absolute coefficient change between sweeps at convergence"
    )
    solver_max_sweeps: int = Field(default=100_000, description="Maximum coordinate-descent sweeps")
    irls_max_iter: int = Field(default=100, description="Maximum reweighting rounds for poisson/multinomial")
    n_lambda: int = Field(default=100, description="Length of the regularization path")
    poisson_eta_clamp: float = Field(default=30.0, description="Bound on the poisson linear predictor")
    sd_floor: float = Field(default=1e-8, description="Floor for the gaussian residual sd")
    multinomial_ridge: float = Field(default=1e-8, description="Ridge pinning the multinomial fit at lambda=0")
    probability_floor: float = Field(default=1e-5, description="Floor for p(1-p) reweighting weights")

    # Sampling settings
    gibbs_burn_in: int = Field(default=100, description="Gibbs sweeps discarded before the first kept row")
    gibbs_thin: int = Field(default=10, description="Gibbs sweeps between kept rows")
    tv_gibbs_sweeps: int = Field(default=10, description="Gibbs sweeps per time point for time-varying sampling")
    divergence_bound: float = Field(default=1e6, description="Magnitude flagging a diverging continuous node")

    # Runtime settings
    threads: int = Field(default=-1, description="Worker threads for nodewise fits (-1 = all cores)")
    metrics_enabled: bool = Field(default=True, description="Enable Prometheus metrics")
    metrics_file: Optional[str] = Field(default=None, description="Prometheus text-file export path")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"Log level must be one of {allowed}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        allowed = ["json", "text"]
        if v not in allowed:
            raise ValueError(f"Log format must be one of {allowed}")
        return v

    @field_validator(
        "solver_tolerance", "sd_floor", "probability_floor", "poisson_eta_clamp", "divergence_bound"
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Numerical constants must be strictly positive."""
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("n_lambda")
    @classmethod
    def validate_n_lambda(cls, v: int) -> int:
        """A path needs at least two points."""
        if v < 2:
            raise ValueError("n_lambda must be at least 2")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """Validate thread count (-1 or a positive count)."""
        if v == 0 or v < -1:
            raise ValueError("threads must be -1 or a positive integer")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings.

    Returns:
        Settings: Application settings instance.

    Raises:
        ConfigurationError: An environment variable holds an invalid value.
    """
    try:
        return Settings()
    except ValidationError as e:
        messages = [err["msg"] for err in e.errors()]
        raise ConfigurationError(f"invalid settings: {messages[0]}", details={"errors": messages}, cause=e) from e
