"""
Configuration settings for the GF(2) Collatz toolkit

This module uses Pydantic's settings management to:
1. Define grouped configuration models for the services
2. Load environment variables (prefix GF2C_) from .env file or environment
3. Validate the configuration values
4. Provide strongly-typed access to settings throughout the app
"""
import logging

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET")


class SearchSettings(BaseModel):
    """Exhaustive f(n) / g(n) search settings"""
    f_ceiling: int
    g_ceiling: int
    workers: int
    partition_bits: int
    min_range_bits: int
    memo_capacity: int
    polybound_exhaustive_limit: int
    random_seed: int


class TraceSettings(BaseModel):
    """Collatz trace settings"""
    max_stored_bits: int
    step_cap_clamp: int


class MatthewsSettings(BaseModel):
    """Generalized map settings"""
    visited_limit: int
    prefix_cap: int


class AppSettings(BaseSettings):
    """Application settings with environment variable loading capabilities"""
    model_config = SettingsConfigDict(
        env_prefix="GF2C_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: str = Field("INFO", description="Root log level for CLI and API")

    # Search settings
    f_ceiling: int = Field(28, ge=1, le=40)
    g_ceiling: int = Field(26, ge=2, le=40)
    workers: int = Field(1, ge=1)
    partition_bits: int = Field(6, ge=0, le=20)
    min_range_bits: int = Field(10, ge=0, le=30)
    memo_capacity: int = Field(1 << 20, ge=1)
    polybound_exhaustive_limit: int = Field(20, ge=1, le=40)
    random_seed: int = Field(20240601)

    # Trace settings
    trace_max_stored_bits: int = Field(1 << 24, ge=1)
    step_cap_clamp: int = Field(10**9, ge=2)

    # Matthews settings
    matthews_visited_limit: int = Field(1024, ge=1)
    matthews_prefix_cap: int = Field(64, ge=1)

    # Optional port setting
    port: int = Field(8080)

    @field_validator("memo_capacity")
    @classmethod
    def _round_capacity(cls, value: int) -> int:
        # power-of-two table size
        return 1 << (value - 1).bit_length()

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level

    @property
    def search(self) -> SearchSettings:
        """Return search settings in the format used by the services"""
        return SearchSettings(
            f_ceiling=self.f_ceiling,
            g_ceiling=self.g_ceiling,
            workers=self.workers,
            partition_bits=self.partition_bits,
            min_range_bits=self.min_range_bits,
            memo_capacity=self.memo_capacity,
            polybound_exhaustive_limit=self.polybound_exhaustive_limit,
            random_seed=self.random_seed,
        )

    @property
    def trace(self) -> TraceSettings:
        """Return trace settings in the format used by the services"""
        return TraceSettings(
            max_stored_bits=self.trace_max_stored_bits,
            step_cap_clamp=self.step_cap_clamp,
        )

    @property
    def matthews(self) -> MatthewsSettings:
        """Return Matthews-map settings in the format used by the services"""
        return MatthewsSettings(
            visited_limit=self.matthews_visited_limit,
            prefix_cap=self.matthews_prefix_cap,
        )


# Create settings instance - environment variables will be loaded automatically
# This creates a singleton instance that can be imported throughout the app
settings = AppSettings()
