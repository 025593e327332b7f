"""
Runtime configuration for ismcheck

Values come from ISMPBT_* environment variables or a .env file, falling
back to the defaults below.
"""

from functools import lru_cache

from dotenv import load_dotenv
from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_SEED = 20240527


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ISMPBT_", extra="ignore")

    seed: int = DEFAULT_SEED
    max_tests: int = Field(default=100, ge=1)
    max_discards: int = Field(default=1000, ge=0)
    size: int = Field(default=30, ge=0)
    fuel: int = Field(default=10_000, ge=1)

    # Ranges for the arbitrary instances; the models never state them
    int_min: int = -100
    int_max: int = 100
    nat_max: int = Field(default=100, ge=0)

    db_path: str = "database/reports.db"
    log_level: str = "WARNING"

    @model_validator(mode="after")
    def _check_int_range(self) -> "Settings":
        if self.int_min > self.int_max:
            raise ValueError(f"int_min ({self.int_min}) exceeds int_max ({self.int_max})")
        return self


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process"""
    load_dotenv()
    return Settings()
