from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg

from src import consts
from src.errors import SolverError


class GramMode(Enum):
    direct = "direct"
    woodbury = "woodbury"


class ZStep(Enum):
    # проекция на неотрицательный октант, beta входит в обновление c
    project = "project"
    # мягкий порог beta/rho, знак не ограничен
    soft_threshold = "soft_threshold"


@dataclass(frozen=True)
class SolverConfig:
    alpha: float = consts.DEFAULT_ALPHA
    beta: float = consts.DEFAULT_BETA
    rho: float = consts.DEFAULT_RHO
    tol: float = consts.DEFAULT_TOL
    max_iter: int = consts.DEFAULT_MAX_ITER

    def __post_init__(self) -> None:
        if not self.alpha >= 0:
            raise SolverError(f"alpha must be >= 0, got {self.alpha}")
        if not self.beta >= 0:
            raise SolverError(f"beta must be >= 0, got {self.beta}")
        if not self.rho > 0:
            raise SolverError(f"rho must be > 0, got {self.rho}")
        if not self.tol > 0:
            raise SolverError(f"tol must be > 0, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise SolverError(f"max_iter must be a positive integer, got {self.max_iter}")

    @property
    def shift(self) -> float:
        return (2.0 * self.alpha + self.rho) / 2.0


@dataclass(frozen=True, eq=False)
class PrecomputedGram:
    """
    Факторизация Холецкого (нижнетреугольная) одной из матриц:
      direct:   X^T X + s I            (N x N)
      woodbury: I + (1/s) X X^T        (D x D)
    где s = (2 alpha + rho) / 2 (для CRC s = lambda).
    """

    mode: GramMode
    factor: np.ndarray
    shift: float
    x: np.ndarray
    alpha: Optional[float] = None
    rho: Optional[float] = None

    @property
    def scale(self) -> float:
        return 1.0 / self.shift

    @property
    def n_atoms(self) -> int:
        return self.x.shape[1]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """(X^T X + s I)^{-1} rhs двумя треугольными решениями."""
        if rhs.shape[0] != self.n_atoms:
            raise SolverError(f"rhs has length {rhs.shape[0]}, expected {self.n_atoms}")
        if self.mode is GramMode.direct:
            return scipy.linalg.cho_solve((self.factor, True), rhs)
        k = self.scale
        inner = scipy.linalg.cho_solve((self.factor, True), self.x @ rhs)
        return k * rhs - (k * k) * (self.x.T @ inner)

    def matches(self, x: np.ndarray, config: SolverConfig) -> bool:
        return x.shape == self.x.shape and np.isclose(self.shift, config.shift, rtol=1e-12)


@dataclass
class SolverWorkspace:
    c: np.ndarray
    z: np.ndarray
    delta: np.ndarray
    xty: np.ndarray
    iter: int = 0

    @classmethod
    def zeros(cls, xty: np.ndarray) -> "SolverWorkspace":
        n = xty.shape[0]
        return cls(c=np.zeros(n), z=np.zeros(n), delta=np.zeros(n), xty=xty)


@dataclass(frozen=True, eq=False)
class SolveResult:
    coding: np.ndarray
    c_final: np.ndarray
    iterations: int
    zc_gap: np.ndarray
    dc: np.ndarray
    dz: np.ndarray
    converged: bool
