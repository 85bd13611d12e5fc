import numpy as np

from src.data.models import SampleMatrix


def unit_columns(values: np.ndarray) -> np.ndarray:
    return values / np.linalg.norm(values, axis=0)


def random_instance(rng: np.random.Generator, dim: int, n: int):
    """Случайный словарь с единичными столбцами и единичный запрос."""
    x = unit_columns(rng.standard_normal((dim, n)))
    y = rng.standard_normal(dim)
    return x, y / np.linalg.norm(y)


def labeled(values, labels) -> SampleMatrix:
    return SampleMatrix.from_labeled(np.asarray(values, dtype=float), list(labels))
