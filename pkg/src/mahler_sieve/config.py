from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .orbit import DEFAULT_DEPTH_CAP
from .refine import DEFAULT_REFINE_CAP
from .sieve import DEFAULT_SIEVE_CAP

CACHE_ENV = "MAHLER_SIEVE_CACHE"
FORMATS = ("json", "csv", "text")


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "mahler_sieve"


def resolve_cache_dir(flag=None) -> Path:
    """--cache-dir flag, then $MAHLER_SIEVE_CACHE, then the platform default."""
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return default_cache_dir()


@dataclass
class RunConfig:
    cache_dir: Path = field(default_factory=default_cache_dir)
    orbit_cap: int = DEFAULT_DEPTH_CAP
    sieve_cap: int = DEFAULT_SIEVE_CAP
    refine_cap: int = DEFAULT_REFINE_CAP
    fmt: str = "text"
    workers: int = 1
    approx: bool = False

    def __post_init__(self):
        for name in ("orbit_cap", "sieve_cap", "refine_cap", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        self.cache_dir = Path(self.cache_dir)
