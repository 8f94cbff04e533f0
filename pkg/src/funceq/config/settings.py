"""Application settings and configuration management."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Centralised configuration for the workbench, loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="FUNCEQ_",
        env_file=str(Path(__file__).resolve().parents[3] / ".env"),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(default="funceq", description="Application name")
    app_version: str = Field(default="0.1.0", description="Application version")

    # Grid and Picard iteration
    grid_n: int = Field(default=2048, ge=2, description="Number of grid intervals N")
    tol: float = Field(default=1e-10, gt=0, description="Stopping tolerance")
    max_iter: int = Field(default=200, ge=1, description="Maximum Picard iterations")
    stop_metric: Literal["sup", "l2", "lip"] = Field(
        default="l2", description="Metric used by the stopping rule"
    )
    fit_skip_first: int = Field(
        default=2, ge=0, description="Transient records skipped by exponential fits"
    )
    boundary_tol: float = Field(
        default=1e-12, description="Tolerance for boundary conditions and endpoint snapping"
    )
    range_tol: float = Field(
        default=1e-12, description="Tolerance band for phi1/phi2 leaving [0, 1]"
    )

    # Quadratic approximation
    golden_tol: float = Field(default=1e-10, description="Golden-section tolerance in b")
    bracket_start: float = Field(
        default=-64.0, lt=-1, description="Initial left end of the b bracket"
    )
    bracket_max_doublings: int = Field(
        default=30, ge=1, description="Bracket expansions before giving up"
    )
    quad_points: int = Field(
        default=4096, ge=2, description="Trapezoid intervals for residue quadrature"
    )

    # Monte-Carlo oracle
    absorption_eps: float = Field(
        default=1e-9, gt=0, lt=0.5, description="Absorption band width near 0 and 1"
    )
    max_steps: int = Field(default=10_000, ge=1, description="Steps before a path times out")
    oracle_samples: int = Field(default=100_000, ge=1, description="Paths per point")
    base_seed: int = Field(
        default=20240501, ge=0, lt=2**64, description="Base seed for path seed derivation"
    )
    oracle_workers: int = Field(default=4, ge=1, description="Concurrent chunk workers")
    oracle_chunk_size: int = Field(
        default=8192, ge=1, description="Paths simulated together in one chunk"
    )
    timeout_fraction: float = Field(
        default=0.10, description="Largest tolerated fraction of timed-out paths"
    )

    # Cost benchmark
    bench_max_depth: int = Field(
        default=26, description="Hard guard on naive recursion depth"
    )
    bench_x0: float = Field(default=0.5, description="Evaluation point of the benchmark")

    # Logging Configuration
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: Optional[str] = Field(
        default=None, description="Log file path; no file sink when unset"
    )
    log_max_size: str = Field(default="10MB", description="Max log file size")
    log_backup_count: int = Field(default=5, description="Log backup count")
    log_format: str = Field(
        default="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {extra[command]} | {name}:{function}:{line} - {message}",
        description="Log format",
    )


# Global settings instance
settings_instance = Settings()
