"""
Run configuration.

Precedence, highest first: explicit overrides (CLI flags), a config file of
`key = value` lines, FXSEARCH_* environment variables (a .env file in the
working directory is loaded first), then the defaults below.
"""

import os
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from fxsearch.exceptions import ConfigurationError

ENV_PREFIX = "FXSEARCH_"


def _default_jobs() -> int:
    return os.cpu_count() or 1


class Settings(BaseModel):
    """All tunables of a run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=42, description="Run seed")
    jobs: int = Field(default_factory=_default_jobs, ge=1, description="Worker processes")
    m0_first_stage: int = Field(default=5, ge=1, description="Base trials per permutation")
    m0_second_stage: int = Field(default=20, ge=1, description="Base trials for refinement")
    budget_exponent: float = Field(default=1.5, gt=0.0, description="r in floor(m0 * d^r)")
    cmaes_sigma0: float = Field(default=0.2, gt=0.0, le=1.0, description="Initial CMA-ES step")
    tpe_n_candidates: int = Field(default=24, ge=1, description="TPE draws per proposal")
    target_rms: float = Field(default=0.1, gt=0.0, description="Level after each stage")
    split_ratios: tuple[float, float, float] = Field(
        default=(0.80, 0.15, 0.05), description="(train, val, eval) track fractions"
    )
    verbosity: int = Field(default=0, ge=-1, le=2, description="-1 quiet, 0 warnings, 1 info, 2 debug")

    @field_validator("split_ratios", mode="before")
    @classmethod
    def parse_ratios(cls, v: Any) -> Any:
        if isinstance(v, str):
            return tuple(float(part) for part in v.replace(",", " ").split())
        return v

    @field_validator("split_ratios")
    @classmethod
    def check_ratios(cls, v: tuple[float, float, float]) -> tuple[float, float, float]:
        if abs(sum(v) - 1.0) > 1e-6 or min(v) < 0.0:
            raise ValueError("split ratios must be non-negative and sum to 1")
        return v


def parse_config_file(path: Path) -> dict[str, str]:
    """
    Parse `key = value` lines; `#` starts a comment.

    Raises:
        ConfigurationError: If the file is unreadable or a line is malformed
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e

    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(
                f"{path}:{lineno}: expected 'key = value'", details={"line": raw}
            )
        values[key.strip()] = value.strip().strip('"').strip("'")
    return values


def environment_values() -> dict[str, str]:
    """FXSEARCH_* variables, keyed by lower-case setting name."""
    env_path = Path.cwd() / ".env"
    if env_path.exists():
        load_dotenv(env_path)
    known = set(Settings.model_fields)
    values = {}
    for name, value in os.environ.items():
        if name.startswith(ENV_PREFIX):
            key = name[len(ENV_PREFIX) :].lower()
            if key in known:
                values[key] = value
    return values


def load_settings(config_file: Path | None = None, **overrides: Any) -> Settings:
    """
    Resolve settings from all sources.

    Args:
        config_file: Optional `key = value` file
        **overrides: Explicit values; None entries are ignored

    Returns:
        Validated settings

    Raises:
        ConfigurationError: On unknown keys or invalid values
    """
    merged: dict[str, Any] = environment_values()
    if config_file is not None:
        merged.update(parse_config_file(config_file))
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings.model_validate(merged)
    except ValidationError as e:
        raise ConfigurationError(
            f"Invalid configuration: {e.error_count()} error(s)",
            details={"errors": [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()]},
        ) from e
