from threading import Lock
from typing import Dict, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from src.data.models import SampleMatrix
from src.errors import SolverError
from src.solver.models import GramMode, PrecomputedGram
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

Dictionary = Union[SampleMatrix, np.ndarray]


def as_array(x: Dictionary) -> np.ndarray:
    return x.values if isinstance(x, SampleMatrix) else np.asarray(x, dtype=np.float64)


def _factorize(
    x: np.ndarray,
    shift: float,
    mode_override: Optional[GramMode],
    alpha: Optional[float] = None,
    rho: Optional[float] = None,
) -> PrecomputedGram:
    if x.ndim != 2:
        raise SolverError(f"dictionary must be 2-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise SolverError("factorization failure: dictionary has non-finite entries")

    dim, n = x.shape
    mode = mode_override or (GramMode.woodbury if n > dim else GramMode.direct)

    if mode is GramMode.direct:
        matrix = x.T @ x + shift * np.eye(n)
    else:
        matrix = np.eye(dim) + (1.0 / shift) * (x @ x.T)

    try:
        factor = scipy.linalg.cholesky(matrix, lower=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"factorization failure ({mode.value}): {e}") from e

    logger.debug(f"Factorized {mode.value} gram: D={dim}, N={n}, shift={shift:g}")
    return PrecomputedGram(
        mode=mode, factor=factor, shift=shift, x=x, alpha=alpha, rho=rho
    )


def precompute(
    x: Dictionary,
    alpha: float,
    rho: float,
    mode_override: Optional[GramMode] = None,
) -> PrecomputedGram:
    """Факторизация для c-шага; не зависит от beta, поэтому одна на весь перебор beta."""
    if alpha < 0:
        raise SolverError(f"alpha must be >= 0, got {alpha}")
    if rho <= 0:
        raise SolverError(f"rho must be > 0, got {rho}")
    return _factorize(as_array(x), (2.0 * alpha + rho) / 2.0, mode_override, alpha, rho)


def precompute_ridge(
    x: Dictionary, shift: float, mode_override: Optional[GramMode] = None
) -> PrecomputedGram:
    if shift <= 0:
        raise SolverError(f"ridge shift must be > 0, got {shift}")
    return _factorize(as_array(x), shift, mode_override)


class GramCache:
    """Потокобезопасный кэш факторизаций по (X, alpha, rho, mode)."""

    def __init__(self) -> None:
        self._lock = Lock()
        self._entries: Dict[Tuple, Tuple[np.ndarray, PrecomputedGram]] = {}
        self.misses = 0

    def get(
        self,
        x: Dictionary,
        alpha: float,
        rho: float,
        mode_override: Optional[GramMode] = None,
    ) -> PrecomputedGram:
        values = as_array(x)
        key = (id(values), float(alpha), float(rho), mode_override)
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None and entry[0] is values:
                return entry[1]
            gram = precompute(values, alpha, rho, mode_override)
            # ссылка на массив держит id уникальным, пока запись жива
            self._entries[key] = (values, gram)
            self.misses += 1
            return gram

    def get_ridge(
        self, x: Dictionary, shift: float, mode_override: Optional[GramMode] = None
    ) -> PrecomputedGram:
        values = as_array(x)
        key = (id(values), "ridge", float(shift), mode_override)
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None and entry[0] is values:
                return entry[1]
            gram = precompute_ridge(values, shift, mode_override)
            self._entries[key] = (values, gram)
            self.misses += 1
            return gram

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
