"""Configuration settings from environment variables."""

import os
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, field_validator


class Settings(BaseModel):
    """Numerical and runtime settings shared by every module."""

    # Tolerances
    tol: float = 1e-9
    drop_threshold: float = 1e-10
    eig_gap_tol: float = 1e-6

    # Search limits
    closure_bound: int = 512
    structure_attempts: int = 8
    max_symmetric_points: int = 5
    max_word_length: int = 4

    # Run control
    seed: int = 0
    mode: str = "strict"
    jobs: int = 1
    log_level: str = "INFO"

    class Config:
        extra = "ignore"

    @field_validator("tol", "drop_threshold", "eig_gap_tol")
    @classmethod
    def _positive_float(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"tolerance must be positive, got {value}")
        return value

    @field_validator("closure_bound", "structure_attempts", "max_symmetric_points", "max_word_length", "jobs")
    @classmethod
    def _positive_int(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"limit must be at least 1, got {value}")
        return value

    @field_validator("seed")
    @classmethod
    def _non_negative_seed(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"seed must be non-negative, got {value}")
        return value

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        value = value.lower()
        if value not in ("strict", "lax"):
            raise ValueError(f"Unsupported mode: {value}. Supported: lax, strict")
        return value


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    load_dotenv()
    return Settings(
        tol=float(os.getenv("XPROD_TOL", "1e-9")),
        drop_threshold=float(os.getenv("XPROD_DROP_THRESHOLD", "1e-10")),
        eig_gap_tol=float(os.getenv("XPROD_EIG_GAP_TOL", "1e-6")),
        closure_bound=int(os.getenv("XPROD_CLOSURE_BOUND", "512")),
        structure_attempts=int(os.getenv("XPROD_STRUCTURE_ATTEMPTS", "8")),
        max_symmetric_points=int(os.getenv("XPROD_MAX_SYMMETRIC_POINTS", "5")),
        max_word_length=int(os.getenv("XPROD_MAX_WORD_LENGTH", "4")),
        seed=int(os.getenv("XPROD_SEED", "0")),
        mode=os.getenv("XPROD_MODE", "strict"),
        jobs=int(os.getenv("XPROD_JOBS", "1")),
        log_level=os.getenv("XPROD_LOG_LEVEL", "INFO"),
    )


def override_settings(
    tol: Optional[float] = None,
    closure_bound: Optional[int] = None,
    mode: Optional[str] = None,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
    max_word_length: Optional[int] = None,
    base: Optional[Settings] = None,
) -> Settings:
    """Create settings with optional overrides from a scenario or the command line."""
    base = base or get_settings()
    return Settings(
        tol=tol if tol is not None else base.tol,
        drop_threshold=base.drop_threshold,
        eig_gap_tol=base.eig_gap_tol,
        closure_bound=closure_bound if closure_bound is not None else base.closure_bound,
        structure_attempts=base.structure_attempts,
        max_symmetric_points=base.max_symmetric_points,
        max_word_length=max_word_length if max_word_length is not None else base.max_word_length,
        seed=seed if seed is not None else base.seed,
        mode=mode if mode is not None else base.mode,
        jobs=jobs if jobs is not None else base.jobs,
        log_level=base.log_level,
    )


def resolve_tol(tol: Optional[float]) -> float:
    """Explicit tolerance, or the configured default."""
    return tol if tol is not None else current_settings().tol


_active_settings: ContextVar[Optional[Settings]] = ContextVar("active_settings", default=None)


def current_settings() -> Settings:
    """Settings activated for the running scenario, else the environment defaults."""
    return _active_settings.get() or get_settings()


@contextmanager
def activate_settings(settings: Settings) -> Iterator[Settings]:
    """Make ``settings`` the ones seen by ``current_settings`` inside the block."""
    token = _active_settings.set(settings)
    try:
        yield settings
    finally:
        _active_settings.reset(token)
