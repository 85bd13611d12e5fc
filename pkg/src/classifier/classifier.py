from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from src import runtime
from src.classifier.coders import coder_gram, run_coder
from src.classifier.models import ClassificationResult, CoderKind
from src.data.models import SampleMatrix
from src.data.preprocessing import normalize_columns, normalize_query
from src.errors import DataError
from src.solver.gram import GramCache
from src.solver.models import PrecomputedGram
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

Queries = Union[np.ndarray, Sequence[np.ndarray]]


def class_residuals(x: SampleMatrix, y: np.ndarray, coding: np.ndarray) -> np.ndarray:
    """r_k = ||y - X_k c_k||, только столбцы и коэффициенты класса k."""
    coding = np.asarray(coding, dtype=np.float64)
    if coding.shape != (x.n_samples,):
        raise DataError(f"coding has shape {coding.shape}, expected ({x.n_samples},)")
    if y.shape != (x.dim,):
        raise DataError(f"query has shape {y.shape}, expected ({x.dim},)")

    residuals = np.empty(x.n_classes)
    for k in range(x.n_classes):
        block = x.partition.block(k)
        residuals[k] = np.linalg.norm(y - x.values[:, block] @ coding[block])
    return residuals


def classify(
    x: SampleMatrix,
    y: np.ndarray,
    coder: CoderKind,
    cache: Optional[GramCache] = None,
) -> ClassificationResult:
    y = normalize_query(y)
    coding, _ = run_coder(x, y, coder, cache if cache is not None else GramCache())
    residuals = class_residuals(x, y, coding)
    # np.argmin отдаёт первый минимум: при равенстве побеждает меньший индекс класса
    k = int(np.argmin(residuals))
    return ClassificationResult(
        label=x.partition.class_ids[k],
        label_index=k,
        residuals=residuals,
        coding=coding,
    )


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    """Нормированный словарь + кодер + кэш факторизаций. После fit не меняется."""

    x: SampleMatrix
    coder: CoderKind
    cache: GramCache = field(default_factory=GramCache)

    @property
    def gram(self) -> PrecomputedGram:
        return coder_gram(self.x, self.coder, self.cache)

    def classify(self, y: np.ndarray) -> ClassificationResult:
        return classify(self.x, y, self.coder, self.cache)

    def classify_many(self, queries: Queries) -> List[ClassificationResult]:
        if isinstance(queries, np.ndarray):
            if queries.ndim != 2:
                raise DataError(f"queries must be a D x M matrix, got shape {queries.shape}")
            columns = [queries[:, j] for j in range(queries.shape[1])]
        else:
            columns = list(queries)
        if not columns:
            return []

        # факторизация до запуска потоков, чтобы воркеры только читали
        _ = self.gram
        workers = min(runtime.worker_count(), len(columns))
        if workers <= 1:
            return [self.classify(y) for y in columns]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.classify, columns))

    def with_coder(self, coder: CoderKind) -> "ClassifierModel":
        """Тот же словарь и кэш: смена beta не требует новой факторизации."""
        return ClassifierModel(x=self.x, coder=coder, cache=self.cache)


def fit_model(train: SampleMatrix, coder: CoderKind) -> ClassifierModel:
    model = ClassifierModel(x=normalize_columns(train), coder=coder)
    _ = model.gram
    logger.info(
        f"Fitted {coder.describe()} on D={train.dim}, N={train.n_samples}, "
        f"K={train.n_classes} ({model.gram.mode.value})"
    )
    return model


def accuracy(predicted: Sequence[str], truth: Sequence[str]) -> float:
    if len(predicted) != len(truth):
        raise DataError(f"{len(predicted)} predictions for {len(truth)} labels")
    if not truth:
        raise DataError("accuracy of an empty prediction set")
    hits = sum(1 for p, t in zip(predicted, truth) if str(p) == str(t))
    return hits / len(truth)
