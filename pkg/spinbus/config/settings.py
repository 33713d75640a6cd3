"""Process-wide settings loaded from the environment.

Values come from ``SPINBUS_*`` environment variables, optionally seeded from a
``.env`` file found from the working directory upward. Run-specific physics lives in the TOML
run config, not here.
"""

from __future__ import annotations

from functools import lru_cache
import os

from dotenv import find_dotenv, load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine and CLI defaults.

    Attributes:
        workers (int): Sweep worker count used when ``--workers`` is absent.
        log_level (str): Root log level when ``--verbose`` is not given.
        max_steps (int): Cap on integrator steps per propagation.
        steps_per_period (int): Integrator steps per period of the fastest
            Hamiltonian frequency (never below 50).
        csv_digits (int): Significant digits in CSV output.
    """

    model_config = SettingsConfigDict(env_prefix="SPINBUS_", extra="ignore")

    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "INFO"
    max_steps: int = Field(default=100_000_000, ge=1)
    steps_per_period: int = Field(default=100, ge=50)
    csv_digits: int = Field(default=17, ge=1, le=17)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    load_dotenv(find_dotenv(usecwd=True))
    return Settings()
