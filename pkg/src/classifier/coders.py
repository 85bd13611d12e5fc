from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from src.classifier.models import CoderKind, CoderName
from src.solver.admm import solve
from src.solver.gram import Dictionary, GramCache, as_array, precompute, precompute_ridge
from src.solver.models import GramMode, PrecomputedGram, SolveResult, SolverConfig, ZStep


def code_crc(
    x: Dictionary,
    y: np.ndarray,
    lam: float,
    gram: Optional[PrecomputedGram] = None,
    mode_override: Optional[GramMode] = None,
) -> np.ndarray:
    """(X^T X + lambda I)^{-1} X^T y; знаки не ограничены."""
    values = as_array(x)
    gram = gram or precompute_ridge(values, lam, mode_override)
    return gram.solve(values.T @ y)


def code_nscr(
    x: Dictionary,
    y: np.ndarray,
    config: SolverConfig,
    gram: Optional[PrecomputedGram] = None,
) -> np.ndarray:
    gram = gram or precompute(x, config.alpha, config.rho)
    return solve(x, y, config, gram).coding


def code_nrc(
    x: Dictionary,
    y: np.ndarray,
    config: SolverConfig,
    gram: Optional[PrecomputedGram] = None,
) -> np.ndarray:
    return code_nscr(x, y, replace(config, alpha=0.0, beta=0.0), gram)


def code_src(
    x: Dictionary,
    y: np.ndarray,
    lam: float,
    config: SolverConfig,
    gram: Optional[PrecomputedGram] = None,
) -> np.ndarray:
    config = replace(config, alpha=0.0, beta=lam)
    gram = gram or precompute(x, 0.0, config.rho)
    return solve(x, y, config, gram, z_step=ZStep.soft_threshold).coding


def code_scr(
    x: Dictionary,
    y: np.ndarray,
    config: SolverConfig,
    gram: Optional[PrecomputedGram] = None,
) -> np.ndarray:
    gram = gram or precompute(x, config.alpha, config.rho)
    return solve(x, y, config, gram, z_step=ZStep.soft_threshold).coding


def coder_gram(x: Dictionary, coder: CoderKind, cache: GramCache) -> PrecomputedGram:
    if coder.name is CoderName.crc:
        return cache.get_ridge(x, coder.lam, coder.mode)
    return cache.get(x, coder.config.alpha, coder.config.rho, coder.mode)


def run_coder(
    x: Dictionary, y: np.ndarray, coder: CoderKind, cache: GramCache
) -> Tuple[np.ndarray, Optional[SolveResult]]:
    gram = coder_gram(x, coder, cache)
    if coder.name is CoderName.crc:
        return code_crc(x, y, coder.lam, gram), None
    result = solve(x, y, coder.config, gram, z_step=coder.z_step)
    return result.coding, result
