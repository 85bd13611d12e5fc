from typing import Union

import numpy as np
import scipy.linalg

from src import consts
from src.data.models import PcaModel, SampleMatrix
from src.errors import DataError
from src.utils.xlogging import get_logger

logger = get_logger(__name__)


def normalize_columns(matrix: SampleMatrix) -> SampleMatrix:
    norms = np.linalg.norm(matrix.values, axis=0)
    zero = np.flatnonzero(norms <= consts.ZERO_NORM_EPS)
    if zero.size:
        raise DataError(f"zero-norm column {int(zero[0])} cannot be normalized")
    return matrix.with_values(matrix.values / norms)


def normalize_query(vector: np.ndarray) -> np.ndarray:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1:
        raise DataError(f"query must be a vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise DataError("query has non-finite entries")
    norm = np.linalg.norm(vector)
    if norm <= consts.ZERO_NORM_EPS:
        raise DataError("zero query cannot be normalized")
    return vector / norm


def fit_pca(train: SampleMatrix, d: int) -> PcaModel:
    """
    PCA через экономное SVD центрированной матрицы. Знак каждой главной оси выбирается так,
    чтобы её наибольшая по модулю компонента была положительной.
    """
    limit = min(train.dim, train.n_samples)
    if not 1 <= d <= limit:
        raise DataError(f"PCA dimension d={d} out of range [1, {limit}]")

    mean = train.values.mean(axis=1)
    centered = train.values - mean[:, None]
    u, _, _ = scipy.linalg.svd(centered, full_matrices=False)

    projection = u[:, :d].T.copy()
    pivots = np.argmax(np.abs(projection), axis=1)
    signs = np.sign(projection[np.arange(d), pivots])
    signs[signs == 0] = 1.0
    projection *= signs[:, None]

    logger.info(f"Fitted PCA: D={train.dim} -> d={d} on N={train.n_samples} samples")
    return PcaModel(mean=mean, projection=projection)


def apply_pca(
    model: PcaModel, data: Union[SampleMatrix, np.ndarray]
) -> Union[SampleMatrix, np.ndarray]:
    if isinstance(data, SampleMatrix):
        if data.dim != model.input_dim:
            raise DataError(f"PCA expects D={model.input_dim}, got {data.dim}")
        return data.with_values(model.projection @ (data.values - model.mean[:, None]))

    data = np.asarray(data, dtype=np.float64)
    if data.shape[0] != model.input_dim:
        raise DataError(f"PCA expects D={model.input_dim}, got {data.shape[0]}")
    if data.ndim == 1:
        return model.projection @ (data - model.mean)
    return model.projection @ (data - model.mean[:, None])
