"""Runtime settings.

Defaults live on the Settings model; any of them can be overridden through
SKEWMON_* environment variables, and a .env file in the working directory is
honoured.
"""

import os
from typing import Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

ENV_PREFIX = "SKEWMON_"


class Settings(BaseModel):
    """Monitor-wide configuration."""

    model_config = ConfigDict(frozen=True)

    unit: int = Field(1, ge=1, description="Time quantum in raw trace units (ms)")
    oracle_max_cgs: int = Field(64, ge=1)
    oracle_max_horizon: int = Field(64, ge=1)
    max_predicate_leaves: int = Field(12, ge=1, le=20)
    check_workers: int = Field(1, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def normalize_level(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level


def _from_environment(environ: Dict[str, str]) -> Dict[str, str]:
    values = {}
    for name in Settings.model_fields:
        key = ENV_PREFIX + name.upper()
        if key in environ:
            values[name] = environ[key]
    return values


def get_settings(environ: Optional[Dict[str, str]] = None) -> Settings:
    """
    Build Settings from defaults, .env and the process environment.

    Args:
        environ: Mapping to read instead of os.environ (tests)

    Returns:
        Validated Settings instance
    """
    if environ is None:
        load_dotenv()
        environ = dict(os.environ)
    return Settings.model_validate(_from_environment(environ))
