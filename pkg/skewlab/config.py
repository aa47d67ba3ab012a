from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from typing import Iterator, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Library and service settings loaded from environment variables."""

    # Run ledger
    database_url: str = "sqlite:///./data/skewlab_runs.db"

    # HTTP surface
    app_host: str = "0.0.0.0"
    app_port: int = 8000
    debug: bool = False

    log_level: str = "INFO"

    # Enumeration and verification budgets
    enumeration_budget: int = 4096
    exhaustive_pair_budget: int = 65536
    exhaustive_triple_budget: int = 300000
    validation_samples: int = 1000
    tower_samples: int = 200
    theta_max_order: int = 64
    alpha_order_cap: int = 256
    mul_cache_size: int = 65536
    subgroup_oracle: bool = False
    subgroup_oracle_limit: int = 256

    # Reports
    seed: int = 0
    workers: int = 4

    class Config:
        env_file = ".env"
        env_prefix = "SKEWLAB_"
        case_sensitive = False


# Per-run overrides; unset outside of run_settings()
_run_settings: ContextVar[Optional[Settings]] = ContextVar("skewlab_run_settings", default=None)


@lru_cache()
def load_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


def get_settings() -> Settings:
    """Settings of the current run, else the cached process settings."""
    settings = _run_settings.get()
    return settings if settings is not None else load_settings()


@contextmanager
def run_settings(**overrides) -> Iterator[Settings]:
    """Run the block against a copy of the current settings with overrides applied.

    The copy is visible only in the current context (thread or task), so
    concurrent runs never see each other's budgets. None values are ignored.
    """
    changes = {key: value for key, value in overrides.items() if value is not None}
    settings = get_settings().model_copy(update=changes)
    token = _run_settings.set(settings)
    try:
        yield settings
    finally:
        _run_settings.reset(token)
