import time
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src import consts, runtime
from src.classifier.classifier import accuracy, fit_model
from src.classifier.models import CoderKind, CoderName, coder_from_name
from src.cli.config import ExperimentSpec
from src.cli.reports import (
    SWEEP_COLUMNS,
    TIMING_COLUMNS,
    BenchmarkReport,
    TrialRecord,
    write_benchmark,
    write_frame,
)
from src.data.loaders import load_dataset
from src.data.models import SampleMatrix
from src.data.preprocessing import apply_pca, fit_pca, normalize_columns, normalize_query
from src.data.splits import split_fraction, subsample_per_class
from src.data.synthetic import make_gaussian_atoms, make_subspace_dataset
from src.errors import ConfigError, DataError, NscrError, TrialError
from src.model_selection.grid import (
    CvGrid,
    CvReport,
    LambdaGrid,
    LambdaReport,
    grid_coder,
    grid_search,
    lambda_search,
    tunes_lambda,
    write_cv_csv,
)
from src.solver.admm import solve, write_histories_csv
from src.solver.gram import precompute
from src.utils.dto import to_json
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

SYNTHETIC_PREFIX = "synthetic:"


def load_input(source: str, seed: int) -> SampleMatrix:
    if source.startswith(SYNTHETIC_PREFIX):
        kind = source[len(SYNTHETIC_PREFIX):]
        if kind == "subspace":
            n_classes, ambient, subspace, atoms, noise = consts.SUBSPACE_FIXTURE
            # половина каждого класса - атомы словаря, половина - запросы
            return make_subspace_dataset(n_classes, ambient, subspace, 2 * atoms, noise, seed)
        if kind == "gaussian":
            n_classes, ambient, atoms = consts.GAUSSIAN_FIXTURE
            return make_gaussian_atoms(n_classes, ambient, atoms, seed)
        raise ConfigError(f"Unknown synthetic dataset '{source}', expected subspace or gaussian")
    matrix, _ = load_dataset(source)
    logger.info(
        f"Loaded {source}: D={matrix.dim}, N={matrix.n_samples}, K={matrix.n_classes}"
    )
    return matrix


def trial_seeds(seed: int, trials: int) -> List[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


def prepare_trial(
    spec: ExperimentSpec,
    data: SampleMatrix,
    test: Optional[SampleMatrix],
    seed: int,
) -> Tuple[SampleMatrix, SampleMatrix]:
    """Разбиение, затем PCA, обученный только на train."""
    if test is not None:
        train = data
        if spec.n_per_class is not None:
            train, _ = subsample_per_class(data, spec.n_per_class, seed)
        holdout: Optional[SampleMatrix] = test
    elif spec.n_per_class is not None:
        train, holdout = subsample_per_class(data, spec.n_per_class, seed)
    else:
        train, holdout = split_fraction(data, spec.train_fraction, seed)

    if holdout is None:
        raise DataError("split left no holdout samples to classify")

    if spec.pca_dim is not None:
        pca = fit_pca(train, spec.pca_dim)
        train = apply_pca(pca, train)
        holdout = apply_pca(pca, holdout)
    return train, holdout


def _inputs(spec: ExperimentSpec) -> Tuple[SampleMatrix, Optional[SampleMatrix]]:
    data = load_input(spec.dataset, spec.seed)
    test = load_input(spec.test_dataset, spec.seed) if spec.test_dataset else None
    return data, test


def _output(spec: ExperimentSpec) -> Path:
    output = Path(spec.output)
    output.mkdir(parents=True, exist_ok=True)
    return output


def trial_coder(
    spec: ExperimentSpec, name: str, train: SampleMatrix, seed: int
) -> CoderKind:
    alpha, beta = spec.alpha_beta()
    lam = spec.lam
    if spec.cv and tunes_lambda(name):
        lam_grid = LambdaGrid(spec.lams, spec.folds)
        lam = lambda_search(train, lam_grid, spec.solver_config(), name, seed, spec.mode).best
    elif spec.cv:
        grid = CvGrid(spec.alphas, spec.betas, spec.folds)
        alpha, beta = grid_search(
            train, grid, spec.solver_config(), name, seed, spec.mode
        ).best
    return coder_from_name(name, spec.solver_config(alpha, beta), lam, spec.mode)


def run_trial(
    coder: CoderKind,
    train: SampleMatrix,
    holdout: SampleMatrix,
    trial: int,
    seed: int,
) -> TrialRecord:
    started = time.perf_counter()
    model = fit_model(train, coder)
    precompute_seconds = time.perf_counter() - started

    started = time.perf_counter()
    results = model.classify_many(holdout.values)
    elapsed = time.perf_counter() - started

    truth = holdout.labels()
    score = 100.0 * accuracy([r.label for r in results], truth)
    with_ab = coder.name is not CoderName.crc
    with_lam = coder.name in (CoderName.crc, CoderName.src)
    return TrialRecord(
        trial=trial,
        seed=seed,
        n_train=train.n_samples,
        n_test=holdout.n_samples,
        alpha=coder.config.alpha if with_ab else None,
        beta=coder.config.beta if with_ab else None,
        lam=coder.lam if with_lam else None,
        accuracy=score,
        seconds_per_query=elapsed / holdout.n_samples,
        precompute_seconds=precompute_seconds,
        query_indices=holdout.indices.tolist(),
        truth=truth,
        results=results,
    )


def cmd_benchmark(spec: ExperimentSpec) -> BenchmarkReport:
    data, test = _inputs(spec)
    output = _output(spec)

    records: List[TrialRecord] = []
    for trial, seed in enumerate(trial_seeds(spec.seed, spec.trials), start=1):
        try:
            train, holdout = prepare_trial(spec, data, test, seed)
            coder = trial_coder(spec, spec.coder, train, seed)
            record = run_trial(coder, train, holdout, trial, seed)
        except NscrError as e:
            raise TrialError(trial, e) from e
        logger.info(
            f"Trial {trial}/{spec.trials}: {coder.describe()} accuracy {record.accuracy:.1f}%"
        )
        records.append(record)

    report = BenchmarkReport.from_trials(spec.coder, records, to_json(spec))
    n_classes = records[0].results[0].residuals.shape[0]
    write_benchmark(output, records, report, n_classes)
    print(report.headline())
    return report


def _sweep_holdout(spec: ExperimentSpec, grid: CvGrid) -> np.ndarray:
    data, test = _inputs(spec)
    scores = np.zeros((len(grid.alphas), len(grid.betas), spec.trials))
    for t, seed in enumerate(trial_seeds(spec.seed, spec.trials)):
        try:
            train, holdout = prepare_trial(spec, data, test, seed)
        except NscrError as e:
            raise TrialError(t + 1, e) from e
        truth = holdout.labels()
        for i, alpha in enumerate(grid.alphas):
            first = spec.solver_config(alpha, grid.betas[0])
            model = fit_model(train, grid_coder(spec.coder, first, spec.mode))
            for j, beta in enumerate(grid.betas):
                coder = grid_coder(spec.coder, spec.solver_config(alpha, beta), spec.mode)
                results = model.with_coder(coder).classify_many(holdout.values)
                scores[i, j, t] = 100.0 * accuracy([r.label for r in results], truth)
    return scores.mean(axis=2)


def _first_train(spec: ExperimentSpec) -> Tuple[SampleMatrix, int]:
    data, test = _inputs(spec)
    seed = trial_seeds(spec.seed, 1)[0]
    train, _ = prepare_trial(spec, data, test, seed)
    return train, seed


def cmd_sweep(spec: ExperimentSpec) -> Path:
    grid = CvGrid(spec.alphas, spec.betas, spec.folds)
    if spec.sweep_mode == "holdout":
        surface = _sweep_holdout(spec, grid)
    else:
        train, seed = _first_train(spec)
        report = grid_search(train, grid, spec.solver_config(), spec.coder, seed, spec.mode)
        surface = 100.0 * report.accuracy

    rows = [
        {"alpha": alpha, "beta": beta, "mean_accuracy": float(surface[i, j])}
        for i, alpha in enumerate(grid.alphas)
        for j, beta in enumerate(grid.betas)
    ]
    path = write_frame(
        pd.DataFrame(rows, columns=SWEEP_COLUMNS), _output(spec) / consts.SWEEP_CSV
    )
    i, j = np.unravel_index(int(np.argmax(surface)), surface.shape)
    print(
        f"sweep ({spec.sweep_mode}): best alpha={grid.alphas[i]:g} beta={grid.betas[j]:g} "
        f"accuracy {surface[i, j]:.1f}%"
    )
    return path


def cmd_cv(spec: ExperimentSpec) -> Union[CvReport, LambdaReport]:
    train, seed = _first_train(spec)
    if tunes_lambda(spec.coder):
        lam_grid = LambdaGrid(spec.lams, spec.folds)
        lam_report = lambda_search(
            train, lam_grid, spec.solver_config(), spec.coder, seed, spec.mode
        )
        write_cv_csv(lam_report, _output(spec) / consts.CV_CSV)
        print(
            f"cv ({lam_grid.folds} folds): best lambda={lam_report.best:g} "
            f"accuracy {100.0 * lam_report.best_accuracy:.1f}%"
        )
        return lam_report

    grid = CvGrid(spec.alphas, spec.betas, spec.folds)
    report = grid_search(train, grid, spec.solver_config(), spec.coder, seed, spec.mode)
    write_cv_csv(report, _output(spec) / consts.CV_CSV)
    print(
        f"cv ({grid.folds} folds): best alpha={report.best[0]:g} beta={report.best[1]:g} "
        f"accuracy {100.0 * report.best_accuracy:.1f}%"
    )
    return report


def cmd_convergence(spec: ExperimentSpec) -> Path:
    """
    Кривые невязок ADMM для одного запроса: столбец query_index тестового набора,
    либо leave-one-out столбец самого набора.
    """
    data, test = _inputs(spec)
    if test is not None:
        if spec.query_index >= test.n_samples:
            raise DataError(
                f"query_index {spec.query_index} out of range for {test.n_samples} test samples"
            )
        dictionary = data
        query = test.values[:, spec.query_index]
    else:
        if spec.query_index >= data.n_samples:
            raise DataError(
                f"query_index {spec.query_index} out of range for {data.n_samples} samples"
            )
        keep = [j for j in range(data.n_samples) if j != spec.query_index]
        dictionary = data.take(keep)
        query = data.values[:, spec.query_index]

    if spec.pca_dim is not None:
        pca = fit_pca(dictionary, spec.pca_dim)
        dictionary = apply_pca(pca, dictionary)
        query = apply_pca(pca, query)

    x = normalize_columns(dictionary)
    y = normalize_query(query)
    # tol = 0: кривая на все max_iter итераций, порог только для флага converged
    full_length = spec.full_length or spec.tol == 0
    if spec.tol == 0:
        spec = replace(spec, tol=consts.DEFAULT_TOL)
    config = spec.solver_config()
    gram = precompute(x, config.alpha, config.rho, spec.mode)
    result = solve(x, y, config, gram, stop_on_convergence=not full_length)

    path = _output(spec) / consts.CONVERGENCE_CSV
    write_histories_csv(result, path)
    logger.info(f"Wrote {path}")
    state = "converged" if result.converged else "not converged"
    print(
        f"convergence: {result.iterations} iterations ({state}), final "
        f"zc_gap={result.zc_gap[-1]:.3e} dc={result.dc[-1]:.3e} dz={result.dz[-1]:.3e}"
    )
    return path


def cmd_time(spec: ExperimentSpec) -> Path:
    data, test = _inputs(spec)
    train, holdout = prepare_trial(spec, data, test, trial_seeds(spec.seed, 1)[0])

    # запросов может быть меньше, чем нужно: идём по кругу
    order = [j % holdout.n_samples for j in range(spec.queries)]
    queries = [holdout.values[:, j] for j in order]
    labels = holdout.labels()
    truth = [labels[j] for j in order]

    host = runtime.host_info()
    logger.info(f"Timing on {host}")

    rows = []
    for name in spec.coders:
        coder = coder_from_name(name, spec.solver_config(), spec.lam, spec.mode)
        started = time.perf_counter()
        model = fit_model(train, coder)
        precompute_seconds = time.perf_counter() - started

        model.classify(queries[0])
        started = time.perf_counter()
        results = [model.classify(y) for y in queries]
        elapsed = time.perf_counter() - started

        seconds = elapsed / len(queries)
        if spec.include_precompute:
            seconds += precompute_seconds / len(queries)
        score = 100.0 * accuracy([r.label for r in results], truth)
        rows.append(
            {
                "coder": coder.name.value,
                "queries": len(queries),
                "seconds_per_query": seconds,
                "precompute_seconds": precompute_seconds,
                "accuracy": score,
                "cpu_name": host["cpu_name"],
                "cpu_cores": host["cpu_cores"],
                "ram_gb": host["ram_gb"],
            }
        )
        print(f"{coder.describe()}: {seconds:.6f} s/query, accuracy {score:.1f}%")

    return write_frame(
        pd.DataFrame(rows, columns=TIMING_COLUMNS), _output(spec) / consts.TIMING_CSV
    )


COMMANDS = {
    "benchmark": cmd_benchmark,
    "sweep": cmd_sweep,
    "convergence": cmd_convergence,
    "time": cmd_time,
    "cv": cmd_cv,
}
