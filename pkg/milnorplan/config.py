import logging
from functools import lru_cache
from typing import Any, Dict

from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigurationError


class Settings(BaseSettings):
    """
    Numerical settings for the Milnor fibration planner.

    Utilizes pydantic-settings for parsing and type-checking. Values are read
    from MILNOR_* environment variables or the .env file, and can be
    overridden at runtime from a JSON document (see `override_settings`).
    """
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="MILNOR_",
        case_sensitive=False,
        extra="ignore",
    )

    # Tube radii applied to catalog germs
    DEFAULT_DELTA: float = 1e-2
    DEFAULT_EPSILON: float = 0.5

    # Tube membership and Newton retraction
    TUBE_TOL: float = 1e-8
    BALL_SLACK: float = 1e-9
    NEWTON_TOL: float = 1e-10
    NEWTON_MAX_ITER: int = 50
    SIGMA_MIN: float = 1e-8

    # Empirical tube validation
    CHECK_SIGMA_MIN: float = 1e-6
    CROWDING_RATIO: float = 0.9
    CROWDING_LIMIT: float = 0.01

    # Horizontal transport
    TRANSPORT_STEPS: int = 2048  # per unit of base parameter
    SECTION_STEPS: int = 512
    TASK_STEPS: int = 256
    DIFF_STEP: float = 1e-6
    RESIDUAL_LIMIT: float = 1e-6
    ADHERENCE_TOL: float = 1e-5

    # Cross-sections
    CLOSURE_LIMIT: float = 1e-5
    RADIAL_CIRCLE_RADIUS: float = 1e-2
    RADIAL_CIRCLE_SAMPLES: int = 16

    # Sphere planners
    REGION_ETA: float = 1e-12
    NORTH_POLE_GUARD: float = 1e-12
    ENDPOINT_TOL: float = 1e-9

    # Fiber joining
    FIBER_PATH_ATTEMPTS: int = 20
    FIBER_PATH_SAMPLES: int = 256

    # Reproducibility
    SEED: int = 0

    # Logging
    LOG_LEVEL: str = "INFO"


# Lower-case keys accepted in --config documents
CONFIG_ALIASES: Dict[str, str] = {
    "delta": "DEFAULT_DELTA",
    "epsilon": "DEFAULT_EPSILON",
    "tol_tube": "TUBE_TOL",
    "steps": "TRANSPORT_STEPS",
    "section_steps": "SECTION_STEPS",
    "task_steps": "TASK_STEPS",
    "seed": "SEED",
}


@lru_cache()
def get_settings() -> Settings:
    """
    Returns the settings instance.
    Uses lru_cache to ensure settings are loaded only once.
    """
    logging.getLogger(__name__).debug("Loading planner settings...")
    return Settings()


settings = get_settings()


def override_settings(overrides: Dict[str, Any]) -> Settings:
    """
    Validates `overrides` against the settings schema and applies them to the
    shared settings instance in place, so every module importing `settings`
    sees the new values.

    Raises:
        ConfigurationError: On unknown keys or values failing validation.
    """
    known = set(Settings.model_fields)
    normalized: Dict[str, Any] = {}
    for key, value in overrides.items():
        name = CONFIG_ALIASES.get(key, key.upper())
        if name not in known:
            raise ConfigurationError(f"Unknown configuration key '{key}'.")
        normalized[name] = value

    try:
        merged = Settings.model_validate({**settings.model_dump(), **normalized})
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e.errors()[0]['msg']}") from e

    if not 0 < merged.DEFAULT_DELTA < merged.DEFAULT_EPSILON:
        raise ConfigurationError("Configuration requires 0 < delta < epsilon.")

    for name in normalized:
        setattr(settings, name, getattr(merged, name))
    return settings
