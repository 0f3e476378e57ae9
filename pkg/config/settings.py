"""
Configuration settings for countcompat.
"""

from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""
    
    # Series / truncation
    truncation_order: int = Field(default=60, alias="COUNTCOMPAT_TRUNCATION_ORDER", ge=1)
    clamp_tolerance: float = Field(default=1e-12, alias="COUNTCOMPAT_CLAMP_TOLERANCE")
    
    # Compatibility verdicts
    parameter_tolerance: float = Field(default=1e-12, alias="COUNTCOMPAT_PARAMETER_TOLERANCE")
    separability_floor: float = Field(default=1e-13, alias="COUNTCOMPAT_SEPARABILITY_FLOOR")
    
    # Oracle
    ce_mass_threshold: float = Field(default=1e-10, alias="COUNTCOMPAT_CE_MASS_THRESHOLD")
    coverage_target: float = Field(default=1.0 - 1e-6, alias="COUNTCOMPAT_COVERAGE_TARGET")
    theta_bound_tail: float = Field(default=1e-12, alias="COUNTCOMPAT_THETA_BOUND_TAIL")
    
    # Linear programming
    lp_pivot_tolerance: float = Field(default=1e-9, alias="COUNTCOMPAT_LP_PIVOT_TOLERANCE")
    lp_residual_tolerance: float = Field(default=1e-8, alias="COUNTCOMPAT_LP_RESIDUAL_TOLERANCE")
    lp_max_iterations: int = Field(default=50000, alias="COUNTCOMPAT_LP_MAX_ITERATIONS")
    certificate_margin: float = Field(default=1e-10, alias="COUNTCOMPAT_CERTIFICATE_MARGIN")
    
    # Simulation
    gibbs_divergence_bound: int = Field(default=1_000_000, alias="COUNTCOMPAT_GIBBS_DIVERGENCE_BOUND")
    gibbs_min_visits: int = Field(default=1000, alias="COUNTCOMPAT_GIBBS_MIN_VISITS")
    gibbs_chains: int = Field(default=1000, alias="COUNTCOMPAT_GIBBS_CHAINS")
    default_seed: int = Field(default=20240501, alias="COUNTCOMPAT_SEED")
    
    # Logging Configuration
    log_level: str = Field(default="INFO", alias="COUNTCOMPAT_LOG_LEVEL")
    log_file: str = Field(default="countcompat.log", alias="COUNTCOMPAT_LOG_FILE")
    
    # Output
    csv_digits: int = Field(default=17, alias="COUNTCOMPAT_CSV_DIGITS")
    
    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        populate_by_name = True


# Global settings instance
settings = Settings()
