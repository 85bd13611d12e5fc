"""CSV-артефакты команд. Все файлы: UTF-8, заголовок, `.` как разделитель дроби, LF."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src import consts
from src.classifier.models import ClassificationResult
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

TRIALS_COLUMNS = ["trial", "seed", "n_train", "n_test", "alpha", "beta", "lam", "accuracy"]
SUMMARY_COLUMNS = [
    "coder",
    "trials",
    "mean_accuracy",
    "std_accuracy",
    "min_accuracy",
    "max_accuracy",
]
TRIAL_TIMING_COLUMNS = ["trial", "seconds_per_query", "precompute_seconds"]
SWEEP_COLUMNS = ["alpha", "beta", "mean_accuracy"]
TIMING_COLUMNS = [
    "coder",
    "queries",
    "seconds_per_query",
    "precompute_seconds",
    "accuracy",
    "cpu_name",
    "cpu_cores",
    "ram_gb",
]


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n_train: int
    n_test: int
    alpha: Optional[float]
    beta: Optional[float]
    lam: Optional[float]
    # проценты
    accuracy: float
    seconds_per_query: float
    precompute_seconds: float
    query_indices: List[int] = field(default_factory=list)
    truth: List[str] = field(default_factory=list)
    results: List[ClassificationResult] = field(default_factory=list)


@dataclass
class BenchmarkReport:
    coder: str
    accuracies: List[float]
    mean_accuracy: float
    std_accuracy: float
    min_accuracy: float
    max_accuracy: float
    seconds_per_query: float
    config: Dict[str, Any]

    @classmethod
    def from_trials(
        cls, coder: str, records: Sequence[TrialRecord], config: Dict[str, Any]
    ) -> "BenchmarkReport":
        accuracies = [r.accuracy for r in records]
        values = np.asarray(accuracies)
        return cls(
            coder=coder,
            accuracies=accuracies,
            mean_accuracy=float(values.mean()),
            std_accuracy=float(values.std()),
            min_accuracy=float(values.min()),
            max_accuracy=float(values.max()),
            seconds_per_query=float(np.mean([r.seconds_per_query for r in records])),
            config=config,
        )

    def headline(self) -> str:
        return (
            f"{self.coder}: {self.mean_accuracy:.1f} ± {self.std_accuracy:.1f} % "
            f"over {len(self.accuracies)} trial(s), {self.seconds_per_query:.6f} s/query"
        )


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"Wrote {path}")
    return path


def trials_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    rows = [
        {
            "trial": r.trial,
            "seed": r.seed,
            "n_train": r.n_train,
            "n_test": r.n_test,
            "alpha": r.alpha,
            "beta": r.beta,
            "lam": r.lam,
            "accuracy": r.accuracy,
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=TRIALS_COLUMNS)


def summary_frame(report: BenchmarkReport) -> pd.DataFrame:
    row = {
        "coder": report.coder,
        "trials": len(report.accuracies),
        "mean_accuracy": report.mean_accuracy,
        "std_accuracy": report.std_accuracy,
        "min_accuracy": report.min_accuracy,
        "max_accuracy": report.max_accuracy,
    }
    return pd.DataFrame([row], columns=SUMMARY_COLUMNS)


def predictions_frame(records: Sequence[TrialRecord], n_classes: int) -> pd.DataFrame:
    residual_columns = [f"r_{k + 1}" for k in range(n_classes)]
    rows = []
    for r in records:
        for index, truth, result in zip(r.query_indices, r.truth, r.results):
            row = {
                "trial": r.trial,
                "query_index": index,
                "predicted_label": result.label,
                "true_label": truth,
            }
            row.update(zip(residual_columns, result.residuals.tolist()))
            rows.append(row)
    columns = ["trial", "query_index", "predicted_label", "true_label"] + residual_columns
    return pd.DataFrame(rows, columns=columns)


def trial_timing_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    rows = [
        {
            "trial": r.trial,
            "seconds_per_query": r.seconds_per_query,
            "precompute_seconds": r.precompute_seconds,
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=TRIAL_TIMING_COLUMNS)


def write_benchmark(
    output: Path, records: Sequence[TrialRecord], report: BenchmarkReport, n_classes: int
) -> List[Path]:
    return [
        write_frame(trials_frame(records), output / consts.TRIALS_CSV),
        write_frame(summary_frame(report), output / consts.SUMMARY_CSV),
        write_frame(predictions_frame(records, n_classes), output / consts.PREDICTIONS_CSV),
        write_frame(trial_timing_frame(records), output / consts.TRIAL_TIMING_CSV),
    ]
