"""Resident-memory sampling for monitoring steps."""

import os
from typing import Optional

import psutil

from ..errors import MemoryLimitExceeded


def rss_mb(pid: Optional[int] = None) -> float:
    """Resident set size of a process (default: this one) in megabytes."""
    try:
        proc = psutil.Process(pid if pid is not None else os.getpid())
        return proc.memory_info().rss / (1024 * 1024)
    except (psutil.NoSuchProcess, psutil.AccessDenied):
        return 0.0


def enforce_limit(memory_limit_mb: Optional[float], current_mb: Optional[float] = None) -> float:
    """
    Sample memory and fail once it is over the ceiling.

    Args:
        memory_limit_mb: Ceiling in megabytes, None disables the check
        current_mb: Already sampled value to use instead of a fresh one

    Returns:
        The sampled resident memory in megabytes
    """
    usage = rss_mb() if current_mb is None else current_mb
    if memory_limit_mb is not None and usage > memory_limit_mb:
        raise MemoryLimitExceeded(
            f"resident memory {usage:.1f} MB is over the limit of {memory_limit_mb} MB"
        )
    return usage
