# ABOUTME: Configuration management for the randomness amplification toolkit.
# ABOUTME: Loads numerical tolerances, optimizer and simulation settings from environment variables.

import os

from dotenv import load_dotenv

from src.errors import ConfigError

load_dotenv()


class Config:
    """Application configuration."""

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = os.getenv(
        "LOG_FORMAT", "%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    # Numerical tolerances
    HERMITIAN_TOL: float = float(os.getenv("HERMITIAN_TOL", "1e-12"))
    PSD_TOL: float = float(os.getenv("PSD_TOL", "1e-10"))
    NORMALIZATION_TOL: float = float(os.getenv("NORMALIZATION_TOL", "1e-10"))

    # Bell-operator optimizer settings
    OPTIMIZER_RESTARTS: int = int(os.getenv("OPTIMIZER_RESTARTS", "32"))
    OPTIMIZER_XATOL: float = float(os.getenv("OPTIMIZER_XATOL", "1e-10"))
    OPTIMIZER_FATOL: float = float(os.getenv("OPTIMIZER_FATOL", "1e-12"))
    OPTIMIZER_MAX_ITER: int = int(os.getenv("OPTIMIZER_MAX_ITER", "4000"))
    OPTIMIZER_SEED: int = int(os.getenv("OPTIMIZER_SEED", "20190101"))
    OPTIMIZER_WORKERS: int = int(os.getenv("OPTIMIZER_WORKERS", "4"))

    # Entropy rate settings
    RATE_GRID_POINTS: int = int(os.getenv("RATE_GRID_POINTS", "200"))
    RATE_GOLDEN_TOL: float = float(os.getenv("RATE_GOLDEN_TOL", "1e-12"))

    # Optimizer result cache
    CACHE_ENABLED: bool = os.getenv("CACHE_ENABLED", "true").lower() == "true"
    CACHE_MAX_SIZE: int = int(os.getenv("CACHE_MAX_SIZE", "256"))

    # Exact extractor error oracle
    EXACT_ERROR_SUBSETS: int = int(os.getenv("EXACT_ERROR_SUBSETS", "200"))
    EXACT_ERROR_SEED: int = int(os.getenv("EXACT_ERROR_SEED", "7"))

    # Protocol simulation
    PROTOCOL_SHARD_SIZE: int = int(os.getenv("PROTOCOL_SHARD_SIZE", "65536"))
    PROTOCOL_WORKERS: int = int(os.getenv("PROTOCOL_WORKERS", "1"))
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))

    @classmethod
    def validate(cls) -> None:
        """Validate numeric configuration."""
        if cls.OPTIMIZER_RESTARTS < 1:
            raise ConfigError("OPTIMIZER_RESTARTS must be at least 1")
        if cls.OPTIMIZER_WORKERS < 1 or cls.PROTOCOL_WORKERS < 1:
            raise ConfigError("worker counts must be at least 1")
        if cls.OPTIMIZER_MAX_ITER < 1:
            raise ConfigError("OPTIMIZER_MAX_ITER must be at least 1")
        for name in ("HERMITIAN_TOL", "PSD_TOL", "NORMALIZATION_TOL", "OPTIMIZER_XATOL",
                     "OPTIMIZER_FATOL", "RATE_GOLDEN_TOL"):
            if getattr(cls, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if cls.RATE_GRID_POINTS < 3:
            raise ConfigError("RATE_GRID_POINTS must be at least 3")
        if cls.PROTOCOL_SHARD_SIZE < 1:
            raise ConfigError("PROTOCOL_SHARD_SIZE must be at least 1")
        if cls.CACHE_MAX_SIZE < 1:
            raise ConfigError("CACHE_MAX_SIZE must be at least 1")
        if cls.EXACT_ERROR_SUBSETS < 0:
            raise ConfigError("EXACT_ERROR_SUBSETS must be non-negative")


config = Config()
