import os
import platform
from functools import lru_cache
from typing import Any, Dict

import psutil

from src import consts
from src.errors import ConfigError


@lru_cache
def worker_count() -> int:
    """
    Число потоков для параллельной классификации.
    NSCR_THREADS=0 или не задан - по числу физических ядер.
    """
    raw = os.environ.get(consts.THREADS_ENV, "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError as e:
        raise ConfigError(f"{consts.THREADS_ENV} must be an integer, got {raw!r}") from e
    if requested < 0:
        raise ConfigError(f"{consts.THREADS_ENV} must be >= 0, got {requested}")
    if requested > 0:
        return requested
    return psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True) or 1


@lru_cache
def host_info() -> Dict[str, Any]:
    freq = None
    try:
        cpu_freq = psutil.cpu_freq()
        if cpu_freq:
            freq = round(cpu_freq.max or cpu_freq.current, 1)
    except Exception:
        freq = None

    return {
        "cpu_name": platform.processor() or platform.machine(),
        "cpu_freq_mhz": freq,
        "cpu_cores": psutil.cpu_count(logical=False) or 1,
        "vcpu": psutil.cpu_count(logical=True) or 1,
        "ram_gb": round(psutil.virtual_memory().total / (1024**3), 2),
        "python": platform.python_version(),
    }
