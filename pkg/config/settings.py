from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

from config.constants import (
    DEFAULT_ANGULAR_SAMPLES,
    DEFAULT_ENV_PREFIX,
    DEFAULT_ORDER_POINTS,
    DEFAULT_ORDER_RMAX,
    DEFAULT_ORDER_RMIN,
    DEFAULT_ZERO_POINTS,
    DEFAULT_ZERO_RMAX,
    DEFAULT_ZERO_RMIN,
    ENVELOPE_BAND,
    ORDER_THRESHOLD,
    ORDER_TOLERANCE,
    RESIDUAL_ANGULAR_SAMPLES,
    RESIDUAL_TOLERANCE,
)


class AppSettings(BaseSettings):
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES
    envelope_band: float = ENVELOPE_BAND
    order_threshold: float = ORDER_THRESHOLD
    order_tolerance: float = ORDER_TOLERANCE
    residual_tolerance: float = RESIDUAL_TOLERANCE
    residual_angular_samples: int = RESIDUAL_ANGULAR_SAMPLES
    order_rmin: float = DEFAULT_ORDER_RMIN
    order_rmax: float = DEFAULT_ORDER_RMAX
    order_points: int = DEFAULT_ORDER_POINTS
    zero_rmin: float = DEFAULT_ZERO_RMIN
    zero_rmax: float = DEFAULT_ZERO_RMAX
    zero_points: int = DEFAULT_ZERO_POINTS
    jobs: int = 1
    log_level: str = "INFO"
    log_dir: Path | None = None
    output_dir: Path | None = None

    model_config = SettingsConfigDict(env_prefix=DEFAULT_ENV_PREFIX, env_file=".env", extra="ignore")


@lru_cache(maxsize=1)
def get_app_settings() -> AppSettings:
    return AppSettings()
