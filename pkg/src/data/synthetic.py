"""Синтетические наборы данных с фиксированным seed для тестов и CLI."""

import numpy as np

from src.data.models import SampleMatrix
from src.errors import DataError


def _unit_columns(values: np.ndarray) -> np.ndarray:
    return values / np.linalg.norm(values, axis=0)


def make_subspace_dataset(
    n_classes: int,
    ambient_dim: int,
    subspace_dim: int,
    per_class: int,
    noise: float,
    seed: int,
) -> SampleMatrix:
    """
    Объединение подпространств: класс k - случайное подпространство размерности subspace_dim.
    Каждый образец - единичный вектор подпространства плюс гауссов шум с СКО noise на компоненту.
    """
    if subspace_dim > ambient_dim:
        raise DataError(f"subspace_dim={subspace_dim} exceeds ambient_dim={ambient_dim}")

    rng = np.random.default_rng(seed)
    blocks = []
    labels = []
    for k in range(n_classes):
        basis, _ = np.linalg.qr(rng.standard_normal((ambient_dim, subspace_dim)))
        points = _unit_columns(basis @ rng.standard_normal((subspace_dim, per_class)))
        points = points + noise * rng.standard_normal(points.shape)
        blocks.append(points)
        labels.extend([str(k)] * per_class)

    return SampleMatrix.from_labeled(np.hstack(blocks), labels)


def make_gaussian_atoms(
    n_classes: int, ambient_dim: int, per_class: int, seed: int
) -> SampleMatrix:
    rng = np.random.default_rng(seed)
    values = _unit_columns(rng.standard_normal((ambient_dim, n_classes * per_class)))
    labels = [str(k) for k in range(n_classes) for _ in range(per_class)]
    return SampleMatrix.from_labeled(values, labels)


def make_query(
    matrix: SampleMatrix, class_index: int, n_atoms: int, noise: float, seed: int
) -> np.ndarray:
    """Неотрицательная комбинация n_atoms атомов класса плюс шум, нормированная."""
    rng = np.random.default_rng(seed)
    block = matrix.class_block(class_index)
    if n_atoms > block.shape[1]:
        raise DataError(f"class {class_index} has only {block.shape[1]} atoms")
    chosen = rng.choice(block.shape[1], size=n_atoms, replace=False)
    weights = rng.uniform(0.5, 1.5, size=n_atoms)
    query = block[:, chosen] @ weights + noise * rng.standard_normal(matrix.dim)
    return query / np.linalg.norm(query)
