"""
Эталонные решатели для малых задач. Нужны только тестам: медленные, но независимые от ADMM.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from src import consts
from src.errors import SolverError
from src.solver.gram import Dictionary, as_array


@dataclass(frozen=True)
class OracleConfig:
    step_tol: float = consts.ORACLE_STEP_TOL
    max_steps: int = consts.ORACLE_MAX_STEPS
    backtrack: float = consts.ORACLE_BACKTRACK

    def __post_init__(self) -> None:
        if not (self.step_tol > 0 and np.isfinite(self.step_tol)):
            raise SolverError(f"step_tol must be positive, got {self.step_tol}")
        if self.max_steps < 1:
            raise SolverError(f"max_steps must be positive, got {self.max_steps}")
        if not 0.0 < self.backtrack < 1.0:
            raise SolverError(f"backtrack must be in (0, 1), got {self.backtrack}")


def objective_value(
    x: Dictionary, y: np.ndarray, c: np.ndarray, alpha: float, beta: float
) -> float:
    values = as_array(x)
    residual = y - values @ c
    return float(residual @ residual + alpha * (c @ c) + beta * np.sum(c))


def reference_nscr(
    x: Dictionary,
    y: np.ndarray,
    alpha: float,
    beta: float,
    config: Optional[OracleConfig] = None,
) -> np.ndarray:
    """Проекционный градиентный спуск с бэктрекингом по неотрицательному октанту."""
    config = config or OracleConfig()
    values = as_array(x)
    y = np.asarray(y, dtype=np.float64)
    gram = values.T @ values
    xty = values.T @ y

    c = np.zeros(values.shape[1])
    step = 1.0
    for _ in range(config.max_steps):
        grad = 2.0 * (gram @ c - xty) + 2.0 * alpha * c + beta
        if np.linalg.norm(c - np.maximum(0.0, c - grad)) <= config.step_tol:
            return c

        while True:
            candidate = np.maximum(0.0, c - step * grad)
            d = candidate - c
            dd = d @ d
            if dd == 0.0:
                break
            # точный квадратичный остаток f(c+d) - f(c) - grad.d
            curvature = d @ (gram @ d) + alpha * dd
            if curvature <= dd / (2.0 * step):
                break
            step *= config.backtrack
            if step < 1e-300:
                raise SolverError("line search collapsed")

        if dd == 0.0:
            return c
        c = candidate
        step /= config.backtrack

    raise SolverError(f"projected gradient did not reach step_tol={config.step_tol:g}")


def reference_active_set(
    x: Dictionary, y: np.ndarray, alpha: float, beta: float
) -> np.ndarray:
    """Полный перебор 2^N носителей с проверкой условий ККТ."""
    values = as_array(x)
    y = np.asarray(y, dtype=np.float64)
    n = values.shape[1]
    if n > consts.ACTIVE_SET_MAX_N:
        raise SolverError(
            f"active-set enumeration supports N <= {consts.ACTIVE_SET_MAX_N}, got {n}"
        )
    if alpha < 0:
        raise SolverError(f"alpha must be >= 0, got {alpha}")

    gram = values.T @ values
    xty = values.T @ y

    best: Optional[np.ndarray] = None
    best_value = np.inf
    for size in range(n + 1):
        for support in itertools.combinations(range(n), size):
            c = np.zeros(n)
            if support:
                s = list(support)
                try:
                    c[s] = scipy.linalg.solve(
                        gram[np.ix_(s, s)] + alpha * np.eye(size),
                        xty[s] - beta / 2.0,
                        assume_a="pos",
                    )
                except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
                    continue
                if np.any(c[s] < 0.0):
                    continue

            grad = 2.0 * (gram @ c - xty) + 2.0 * alpha * c + beta
            off = np.ones(n, dtype=bool)
            off[list(support)] = False
            if np.any(grad[off] < -1e-10):
                continue

            value = objective_value(values, y, c, alpha, beta)
            if value < best_value:
                best, best_value = c, value

    if best is None:
        raise SolverError("no KKT point found")
    return best
