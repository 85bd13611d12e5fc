import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.data.models import SampleMatrix
from src.errors import DataError


def _split(
    matrix: SampleMatrix, counts: Sequence[int], seed: int
) -> Tuple[SampleMatrix, Optional[SampleMatrix]]:
    rng = np.random.default_rng(seed)
    train_cols: List[int] = []
    holdout_cols: List[int] = []

    partition = matrix.partition
    for k, (class_id, count) in enumerate(zip(partition.class_ids, counts)):
        block = np.arange(partition.boundaries[k], partition.boundaries[k + 1])
        if count > block.size:
            raise DataError(
                f"class '{class_id}' has {block.size} samples, fewer than the {count} requested"
            )
        order = rng.permutation(block.size)
        train_cols.extend(np.sort(block[order[:count]]).tolist())
        holdout_cols.extend(np.sort(block[order[count:]]).tolist())

    train = matrix.take(train_cols)
    holdout = matrix.take(holdout_cols) if holdout_cols else None
    return train, holdout


def subsample_per_class(
    matrix: SampleMatrix, n_per_class: int, seed: int
) -> Tuple[SampleMatrix, Optional[SampleMatrix]]:
    """Ровно n_per_class случайных образцов каждого класса в train, остальное - в holdout."""
    if n_per_class < 1:
        raise DataError(f"n_per_class must be positive, got {n_per_class}")
    return _split(matrix, [n_per_class] * matrix.n_classes, seed)


def split_fraction(
    matrix: SampleMatrix, fraction: float, seed: int
) -> Tuple[SampleMatrix, Optional[SampleMatrix]]:
    if not 0.0 < fraction <= 1.0:
        raise DataError(f"train fraction must be in (0, 1], got {fraction}")
    counts = [max(1, math.floor(fraction * size)) for size in matrix.partition.sizes()]
    return _split(matrix, counts, seed)
