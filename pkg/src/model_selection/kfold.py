from typing import List, Tuple

import numpy as np
from sklearn.model_selection import StratifiedKFold

from src.data.models import SampleMatrix
from src.errors import DataError

Split = Tuple[np.ndarray, np.ndarray]


def stratified_kfold(train: SampleMatrix, folds: int, seed: int) -> List[Split]:
    """
    Разбиение столбцов train на folds пар (fit, validate). Внутри каждого класса
    размеры validate-частей отличаются не более чем на 1.
    """
    if folds < 2:
        raise DataError(f"folds must be >= 2, got {folds}")
    smallest = min(train.partition.sizes())
    if folds > smallest:
        raise DataError(f"folds={folds} exceeds the smallest class size {smallest}")

    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    labels = np.asarray(train.labels())
    placeholder = np.zeros((train.n_samples, 1))
    return [
        (np.sort(fit_idx), np.sort(val_idx))
        for fit_idx, val_idx in splitter.split(placeholder, labels)
    ]
