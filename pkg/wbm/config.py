"""
Configuration settings for the weighted Brunn-Minkowski toolkit.
"""

import os
from typing import Any, Dict

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings, overridable through WBM_* environment variables or .env."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="WBM_",
        case_sensitive=True,
        extra="ignore",
    )

    # Reproducibility
    SEED: int = 20240611

    # Geometry
    DEDUP_TOL: float = 1e-10
    GEOMETRY_TOL: float = 1e-9
    DIRECTION_NET_SIZE: int = 360
    MAX_EXACT_HULL_DIM: int = 4

    # Quadrature
    QUADRATURE_ORDER: int = 32
    FACET_QUADRATURE_ORDER: int = 16
    SOLID_QUADRATURE_ORDER: int = 12

    # Quasi-Monte-Carlo
    QMC_LOG2_POINTS: int = 14
    QMC_REPLICATES: int = 8
    SUPPORT_NET_SIZE: int = 512

    # Finite differences
    FD_EPS0: float = 0.2
    FD_LEVELS: int = 7
    FD_RICHARDSON_LEVELS: int = 3

    # Verdicts
    VERDICT_SIGMA: float = 3.0
    ROUNDING_RTOL: float = 1e-12

    # Sweeps
    MAX_WORKERS: int = 4

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FORMAT: str = "console"

    def snapshot(self) -> Dict[str, Any]:
        """Settings echoed into report headers."""
        return self.model_dump()


class WBMConstants:
    """Fixed contract values."""

    # Report CSV
    CSV_VERSION = "1"
    REPORT_COLUMNS = [
        "claim_id",
        "inequality",
        "measure",
        "body_ids",
        "lhs",
        "lhs_err",
        "rhs",
        "rhs_err",
        "margin",
        "verdict",
    ]
    EVAL_COLUMNS = [
        "quantity",
        "measure",
        "body_ids",
        "value",
        "abs_error",
        "method",
        "agreement_flag",
    ]

    # Spec file discriminators
    BODY_TYPES = ["polytope", "zonotope", "ball", "segment", "sum"]
    MEASURE_TYPES = ["lebesgue", "gaussian", "radial_power", "radial_exp"]
    RADIAL_EXP_FAMILIES = ["gaussian", "power", "log"]

    # Exit codes
    EXIT_OK = 0
    EXIT_MISMATCH = 1
    EXIT_INVALID_CONFIG = 2


# Global settings instance
settings = Settings()
