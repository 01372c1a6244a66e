"""
Runtime settings read from the environment
"""

import os
from typing import Optional
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Environment-driven runtime settings"""

    threads: int = Field(1, ge=1)
    output_dir: str = "results"
    block_size: int = Field(512, ge=1)
    log_experiments: bool = False


def _int_env(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


def get_settings() -> Settings:
    """Build settings from the current environment (read on every call)"""
    cpu = os.cpu_count() or 1
    threads = _int_env('CURVKIT_THREADS', None)
    return Settings(
        threads=max(1, threads or cpu),
        output_dir=os.getenv('CURVKIT_OUTPUT_DIR', 'results'),
        block_size=_int_env('CURVKIT_BLOCK_SIZE', 512),
        log_experiments=os.getenv('LOG_EXPERIMENTS', 'false').lower() == 'true',
    )
