from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DataError


def class_sort_key(class_id: str) -> Tuple[int, Any]:
    """Числовые метки сортируются как числа ("2" < "10"), остальные - как строки."""
    text = str(class_id).strip()
    try:
        return 0, int(text), text
    except ValueError:
        return 1, text, text


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ClassPartition:
    class_ids: Tuple[str, ...]
    boundaries: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_ids", tuple(str(c) for c in self.class_ids))
        object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))

        if not self.class_ids:
            raise DataError("partition must contain at least one class")
        if len(set(self.class_ids)) != len(self.class_ids):
            raise DataError("class ids must be distinct")
        if len(self.boundaries) != len(self.class_ids) + 1:
            raise DataError(
                f"expected {len(self.class_ids) + 1} boundaries, got {len(self.boundaries)}"
            )
        if self.boundaries[0] != 0:
            raise DataError("first boundary must be 0")
        for k, (lo, hi) in enumerate(zip(self.boundaries[:-1], self.boundaries[1:])):
            if hi <= lo:
                raise DataError(f"class '{self.class_ids[k]}' is empty")

    @classmethod
    def from_grouped_labels(cls, labels: Sequence[str]) -> "ClassPartition":
        ids: List[str] = []
        bounds = [0]
        for i, label in enumerate(labels):
            label = str(label)
            if ids and ids[-1] == label:
                continue
            if label in ids:
                raise DataError(f"labels are not grouped: class '{label}' reappears at column {i}")
            if ids:
                bounds.append(i)
            ids.append(label)
        bounds.append(len(labels))
        return cls(tuple(ids), tuple(bounds))

    @property
    def n_classes(self) -> int:
        return len(self.class_ids)

    @property
    def n_samples(self) -> int:
        return self.boundaries[-1]

    def sizes(self) -> Tuple[int, ...]:
        return tuple(hi - lo for lo, hi in zip(self.boundaries[:-1], self.boundaries[1:]))

    def block(self, k: int) -> slice:
        return slice(self.boundaries[k], self.boundaries[k + 1])

    def labels(self) -> List[str]:
        out: List[str] = []
        for class_id, size in zip(self.class_ids, self.sizes()):
            out.extend([class_id] * size)
        return out


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """
    Матрица признаков D x N: столбцы - образцы, сгруппированные по классам.
    indices - исходные номера столбцов (для проверки разбиений).
    """

    values: np.ndarray
    partition: ClassPartition
    indices: Optional[np.ndarray] = field(default=None)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise DataError(f"sample matrix must be 2-D, got {values.ndim}-D")
        dim, n = values.shape
        if dim < 1 or n < 1:
            raise DataError(f"sample matrix must be non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DataError(f"non-finite entry at feature {bad[0]}, sample {bad[1]}")
        if self.partition.n_samples != n:
            raise DataError(
                f"partition covers {self.partition.n_samples} columns, matrix has {n}"
            )

        if self.indices is None:
            indices = np.arange(n, dtype=np.int64)
        else:
            indices = np.array(self.indices, dtype=np.int64, copy=True)
            if indices.shape != (n,):
                raise DataError(f"indices must have length {n}, got {indices.shape}")

        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "indices", _readonly(indices))

    @classmethod
    def from_labeled(
        cls,
        values: np.ndarray,
        labels: Sequence[str],
        indices: Optional[np.ndarray] = None,
    ) -> "SampleMatrix":
        """Группирует столбцы по возрастанию метки класса (стабильно внутри класса)."""
        values = np.asarray(values, dtype=np.float64)
        labels = [str(label) for label in labels]
        if values.ndim != 2 or values.shape[1] != len(labels):
            raise DataError(
                f"{len(labels)} labels do not match matrix of shape {values.shape}"
            )
        order = sorted(range(len(labels)), key=lambda i: class_sort_key(labels[i]))
        if indices is None:
            indices = np.arange(len(labels), dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        return cls(
            values=values[:, order],
            partition=ClassPartition.from_grouped_labels([labels[i] for i in order]),
            indices=indices[order],
        )

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        return self.partition.n_classes

    def labels(self) -> List[str]:
        return self.partition.labels()

    def class_block(self, k: int) -> np.ndarray:
        return self.values[:, self.partition.block(k)]

    def with_values(self, values: np.ndarray) -> "SampleMatrix":
        return SampleMatrix(values=values, partition=self.partition, indices=self.indices)

    def take(self, columns: Sequence[int]) -> "SampleMatrix":
        columns = np.asarray(columns, dtype=np.int64)
        labels = self.labels()
        return SampleMatrix.from_labeled(
            self.values[:, columns],
            [labels[c] for c in columns],
            self.indices[columns],
        )


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray
    projection: np.ndarray

    @property
    def d(self) -> int:
        return self.projection.shape[0]

    @property
    def input_dim(self) -> int:
        return self.projection.shape[1]
