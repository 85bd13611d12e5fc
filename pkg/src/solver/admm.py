"""
ADMM для задачи
    min ||y - Xc||^2 + alpha ||c||^2 + beta 1^T c   при c >= 0
с расщеплением c = z, множителем delta и штрафом rho.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from src.errors import SolverError
from src.solver.gram import Dictionary, as_array
from src.solver.models import PrecomputedGram, SolveResult, SolverConfig, SolverWorkspace, ZStep
from src.utils.xlogging import get_logger

logger = get_logger(__name__)


def update_c(
    workspace: SolverWorkspace,
    x: Dictionary,
    y: np.ndarray,
    config: SolverConfig,
    gram: PrecomputedGram,
    z_step: ZStep = ZStep.project,
) -> np.ndarray:
    values = as_array(x)
    if y.shape[0] != values.shape[0]:
        raise SolverError(f"query has length {y.shape[0]}, dictionary has D={values.shape[0]}")
    if workspace.c.shape[0] != values.shape[1]:
        raise SolverError(
            f"workspace has length {workspace.c.shape[0]}, dictionary has N={values.shape[1]}"
        )

    rhs = workspace.xty + (config.rho / 2.0) * workspace.z + 0.5 * workspace.delta
    if z_step is ZStep.project:
        # beta/2 вычитается из каждой компоненты (градиент beta 1^T c)
        rhs = rhs - config.beta / 2.0
    return gram.solve(rhs)


def update_z(
    workspace: SolverWorkspace, config: SolverConfig, z_step: ZStep = ZStep.project
) -> np.ndarray:
    v = workspace.c - workspace.delta / config.rho
    if z_step is ZStep.project:
        return np.maximum(0.0, v)
    threshold = config.beta / config.rho
    return np.sign(v) * np.maximum(np.abs(v) - threshold, 0.0)


def update_dual(workspace: SolverWorkspace, config: SolverConfig) -> np.ndarray:
    return workspace.delta + config.rho * (workspace.z - workspace.c)


def check_convergence(residuals: Tuple[float, float, float], tol: float) -> bool:
    zc_gap, dc, dz = residuals
    return zc_gap <= tol and dc <= tol and dz <= tol


def solve(
    x: Dictionary,
    y: np.ndarray,
    config: SolverConfig,
    gram: PrecomputedGram,
    z_step: ZStep = ZStep.project,
    stop_on_convergence: bool = True,
) -> SolveResult:
    values = as_array(x)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] != values.shape[0]:
        raise SolverError(f"query shape {y.shape} does not match D={values.shape[0]}")
    if not gram.matches(values, config):
        raise SolverError("precomputed gram does not match dictionary/alpha/rho")

    workspace = SolverWorkspace.zeros(values.T @ y)
    zc_hist = np.empty(config.max_iter)
    dc_hist = np.empty(config.max_iter)
    dz_hist = np.empty(config.max_iter)
    converged = False

    for t in range(config.max_iter):
        c_prev, z_prev = workspace.c, workspace.z
        workspace.c = update_c(workspace, values, y, config, gram, z_step)
        workspace.z = update_z(workspace, config, z_step)
        workspace.delta = update_dual(workspace, config)
        workspace.iter = t + 1

        if not (
            np.all(np.isfinite(workspace.c))
            and np.all(np.isfinite(workspace.z))
            and np.all(np.isfinite(workspace.delta))
        ):
            raise SolverError("non-finite iterate", iteration=workspace.iter)

        residuals = (
            float(np.linalg.norm(workspace.z - workspace.c)),
            float(np.linalg.norm(workspace.c - c_prev)),
            float(np.linalg.norm(workspace.z - z_prev)),
        )
        zc_hist[t], dc_hist[t], dz_hist[t] = residuals

        if stop_on_convergence and check_convergence(residuals, config.tol):
            converged = True
            break

    n_iter = workspace.iter
    if not stop_on_convergence:
        converged = check_convergence((zc_hist[-1], dc_hist[-1], dz_hist[-1]), config.tol)
    if not converged:
        logger.debug(f"ADMM stopped at T={n_iter} without meeting tol={config.tol:g}")

    return SolveResult(
        coding=workspace.z,
        c_final=workspace.c,
        iterations=n_iter,
        zc_gap=zc_hist[:n_iter].copy(),
        dc=dc_hist[:n_iter].copy(),
        dz=dz_hist[:n_iter].copy(),
        converged=converged,
    )


def histories_frame(result: SolveResult) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "iter": np.arange(1, result.iterations + 1),
            "zc_gap": result.zc_gap,
            "dc": result.dc,
            "dz": result.dz,
        }
    )


def write_histories_csv(result: SolveResult, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    histories_frame(result).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
