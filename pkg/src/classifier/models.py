from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from src import consts
from src.errors import ConfigError
from src.solver.models import GramMode, SolverConfig, ZStep


class CoderName(Enum):
    nscr = "nscr"
    crc = "crc"
    nrc = "nrc"
    src = "src"
    scr = "scr"


@dataclass(frozen=True)
class CoderKind:
    name: CoderName
    config: SolverConfig = field(default_factory=SolverConfig)
    lam: float = 0.0
    mode: Optional[GramMode] = None

    def __post_init__(self) -> None:
        if self.name in (CoderName.crc, CoderName.src) and not self.lam > 0:
            raise ConfigError(f"{self.name.value} requires lambda > 0, got {self.lam}")
        if self.name is CoderName.nrc and (self.config.alpha != 0 or self.config.beta != 0):
            raise ConfigError("nrc requires alpha = beta = 0")
        if self.name is CoderName.src and (
            self.config.alpha != 0 or self.config.beta != self.lam
        ):
            raise ConfigError("src config must carry alpha = 0 and beta = lambda")

    @classmethod
    def nscr(cls, config: SolverConfig, mode: Optional[GramMode] = None) -> "CoderKind":
        return cls(CoderName.nscr, config, mode=mode)

    @classmethod
    def crc(
        cls, lam: float = consts.DEFAULT_CRC_LAMBDA, mode: Optional[GramMode] = None
    ) -> "CoderKind":
        return cls(CoderName.crc, lam=lam, mode=mode)

    @classmethod
    def nrc(cls, config: SolverConfig, mode: Optional[GramMode] = None) -> "CoderKind":
        return cls(CoderName.nrc, replace(config, alpha=0.0, beta=0.0), mode=mode)

    @classmethod
    def src(
        cls,
        lam: float = consts.DEFAULT_SRC_LAMBDA,
        config: Optional[SolverConfig] = None,
        mode: Optional[GramMode] = None,
    ) -> "CoderKind":
        if not lam > 0:
            raise ConfigError(f"src requires lambda > 0, got {lam}")
        # l1-вес SRC идёт в мягкий порог z-шага как beta
        config = replace(config or SolverConfig(), alpha=0.0, beta=lam)
        return cls(CoderName.src, config, lam=lam, mode=mode)

    @classmethod
    def scr(cls, config: SolverConfig, mode: Optional[GramMode] = None) -> "CoderKind":
        return cls(CoderName.scr, config, mode=mode)

    @property
    def z_step(self) -> ZStep:
        if self.name in (CoderName.src, CoderName.scr):
            return ZStep.soft_threshold
        return ZStep.project

    def describe(self) -> str:
        if self.name is CoderName.crc:
            return f"crc(lambda={self.lam:g})"
        if self.name is CoderName.src:
            return f"src(lambda={self.lam:g}, rho={self.config.rho:g})"
        c = self.config
        return (
            f"{self.name.value}(alpha={c.alpha:g}, beta={c.beta:g}, rho={c.rho:g}, "
            f"tol={c.tol:g}, T={c.max_iter})"
        )


def coder_from_name(
    name: str,
    config: SolverConfig,
    lam: Optional[float] = None,
    mode: Optional[GramMode] = None,
) -> CoderKind:
    try:
        kind = CoderName(name.strip().lower())
    except ValueError as e:
        options = ", ".join(c.value for c in CoderName)
        raise ConfigError(f"Unknown coder '{name}', expected one of: {options}") from e

    if kind is CoderName.nscr:
        return CoderKind.nscr(config, mode)
    if kind is CoderName.nrc:
        return CoderKind.nrc(config, mode)
    if kind is CoderName.scr:
        return CoderKind.scr(config, mode)
    if kind is CoderName.crc:
        return CoderKind.crc(consts.DEFAULT_CRC_LAMBDA if lam is None else lam, mode)
    return CoderKind.src(consts.DEFAULT_SRC_LAMBDA if lam is None else lam, config, mode)


@dataclass(frozen=True, eq=False)
class ClassificationResult:
    label: str
    label_index: int
    residuals: np.ndarray
    coding: np.ndarray
