from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src import consts
from src.classifier.classifier import accuracy, fit_model
from src.classifier.models import CoderKind, CoderName, coder_from_name
from src.data.models import SampleMatrix
from src.errors import ConfigError
from src.model_selection.kfold import stratified_kfold
from src.solver.models import GramMode, SolverConfig
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

GRID_CODERS = (CoderName.nscr, CoderName.scr)
LAMBDA_CODERS = (CoderName.crc, CoderName.src)


@dataclass(frozen=True)
class CvGrid:
    alphas: List[float] = field(default_factory=lambda: list(consts.DEFAULT_GRID))
    betas: List[float] = field(default_factory=lambda: list(consts.DEFAULT_GRID))
    folds: int = consts.DEFAULT_FOLDS

    def __post_init__(self) -> None:
        alphas = sorted(float(a) for a in self.alphas)
        betas = sorted(float(b) for b in self.betas)
        if not alphas or not betas:
            raise ConfigError("CV grid needs at least one alpha and one beta")
        if alphas[0] < 0 or betas[0] < 0:
            raise ConfigError("CV grid values must be >= 0")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)


@dataclass(frozen=True, eq=False)
class CvReport:
    alphas: List[float]
    betas: List[float]
    # средняя по фолдам точность, |alphas| x |betas|
    accuracy: np.ndarray
    # |alphas| x |betas| x folds
    per_fold: np.ndarray
    best: Tuple[float, float]
    best_accuracy: float


@dataclass(frozen=True)
class LambdaGrid:
    """Одна ось перебора: lambda для CRC / SRC."""

    lams: List[float] = field(default_factory=lambda: list(consts.DEFAULT_LAMBDA_GRID))
    folds: int = consts.DEFAULT_FOLDS

    def __post_init__(self) -> None:
        lams = sorted(float(v) for v in self.lams)
        if not lams:
            raise ConfigError("lambda grid needs at least one value")
        if lams[0] <= 0:
            raise ConfigError("lambda grid values must be > 0")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        object.__setattr__(self, "lams", lams)


@dataclass(frozen=True, eq=False)
class LambdaReport:
    lams: List[float]
    accuracy: np.ndarray
    # |lams| x folds
    per_fold: np.ndarray
    best: float
    best_accuracy: float


def grid_coder(
    coder_name: str, config: SolverConfig, mode: Optional[GramMode]
) -> CoderKind:
    coder = coder_from_name(coder_name, config, mode=mode)
    if coder.name not in GRID_CODERS:
        options = ", ".join(c.value for c in GRID_CODERS)
        raise ConfigError(f"grid search tunes (alpha, beta) of {options}, not '{coder_name}'")
    return coder


def grid_search(
    train: SampleMatrix,
    grid: CvGrid,
    base_config: Optional[SolverConfig] = None,
    coder_name: str = CoderName.nscr.value,
    seed: int = 0,
    mode: Optional[GramMode] = None,
) -> CvReport:
    """
    Для каждой пары (alpha, beta): обучение на дополнении фолда, классификация фолда.
    Факторизация зависит только от (фолд, alpha) и переиспользуется для всех beta.
    """
    base_config = base_config or SolverConfig()
    grid_coder(coder_name, base_config, mode)
    splits = stratified_kfold(train, grid.folds, seed)

    per_fold = np.zeros((len(grid.alphas), len(grid.betas), len(splits)))
    for f, (fit_idx, val_idx) in enumerate(splits):
        fit = train.take(fit_idx)
        validate = train.take(val_idx)
        truth = validate.labels()
        for i, alpha in enumerate(grid.alphas):
            first = replace(base_config, alpha=alpha, beta=grid.betas[0])
            model = fit_model(fit, grid_coder(coder_name, first, mode))
            for j, beta in enumerate(grid.betas):
                coder = grid_coder(coder_name, replace(first, beta=beta), mode)
                results = model.with_coder(coder).classify_many(validate.values)
                per_fold[i, j, f] = accuracy([r.label for r in results], truth)
                logger.debug(
                    f"CV fold {f + 1}/{len(splits)} alpha={alpha:g} beta={beta:g}: "
                    f"{per_fold[i, j, f]:.4f}"
                )

    mean = per_fold.mean(axis=2)
    # argmax по строкам: при равенстве меньший alpha, затем меньший beta
    i, j = np.unravel_index(int(np.argmax(mean)), mean.shape)
    best = (grid.alphas[i], grid.betas[j])
    logger.info(
        f"CV best alpha={best[0]:g} beta={best[1]:g} mean accuracy {mean[i, j]:.4f}"
    )
    return CvReport(
        alphas=list(grid.alphas),
        betas=list(grid.betas),
        accuracy=mean,
        per_fold=per_fold,
        best=best,
        best_accuracy=float(mean[i, j]),
    )


def tunes_lambda(coder_name: str) -> bool:
    return coder_from_name(coder_name, SolverConfig()).name in LAMBDA_CODERS


def lambda_coder(
    coder_name: str, lam: float, config: SolverConfig, mode: Optional[GramMode]
) -> CoderKind:
    coder = coder_from_name(coder_name, config, lam, mode)
    if coder.name not in LAMBDA_CODERS:
        options = ", ".join(c.value for c in LAMBDA_CODERS)
        raise ConfigError(f"lambda search tunes {options}, not '{coder_name}'")
    return coder


def lambda_search(
    train: SampleMatrix,
    grid: LambdaGrid,
    base_config: Optional[SolverConfig] = None,
    coder_name: str = CoderName.crc.value,
    seed: int = 0,
    mode: Optional[GramMode] = None,
) -> LambdaReport:
    """
    k-fold перебор lambda. Модель фолда одна на все lambda: CRC берёт из её кэша
    факторизацию X^T X + lambda I для каждого lambda, SRC - одну на фолд (alpha = 0).
    """
    base_config = base_config or SolverConfig()
    lambda_coder(coder_name, grid.lams[0], base_config, mode)
    splits = stratified_kfold(train, grid.folds, seed)

    per_fold = np.zeros((len(grid.lams), len(splits)))
    for f, (fit_idx, val_idx) in enumerate(splits):
        validate = train.take(val_idx)
        truth = validate.labels()
        model = fit_model(
            train.take(fit_idx), lambda_coder(coder_name, grid.lams[0], base_config, mode)
        )
        for i, lam in enumerate(grid.lams):
            coder = lambda_coder(coder_name, lam, base_config, mode)
            results = model.with_coder(coder).classify_many(validate.values)
            per_fold[i, f] = accuracy([r.label for r in results], truth)
            logger.debug(
                f"CV fold {f + 1}/{len(splits)} lambda={lam:g}: {per_fold[i, f]:.4f}"
            )

    mean = per_fold.mean(axis=1)
    # при равенстве меньший lambda
    i = int(np.argmax(mean))
    logger.info(f"CV best lambda={grid.lams[i]:g} mean accuracy {mean[i]:.4f}")
    return LambdaReport(
        lams=list(grid.lams),
        accuracy=mean,
        per_fold=per_fold,
        best=grid.lams[i],
        best_accuracy=float(mean[i]),
    )


def cv_frame(report: CvReport) -> pd.DataFrame:
    rows = [
        {"alpha": alpha, "beta": beta, "mean_accuracy": float(report.accuracy[i, j])}
        for i, alpha in enumerate(report.alphas)
        for j, beta in enumerate(report.betas)
    ]
    return pd.DataFrame(rows, columns=["alpha", "beta", "mean_accuracy"])


def lambda_frame(report: LambdaReport) -> pd.DataFrame:
    return pd.DataFrame(
        {"lam": report.lams, "mean_accuracy": report.accuracy.tolist()},
        columns=["lam", "mean_accuracy"],
    )


def write_cv_csv(report: Union[CvReport, LambdaReport], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = cv_frame(report) if isinstance(report, CvReport) else lambda_frame(report)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"Wrote {path}")
