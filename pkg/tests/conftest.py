import numpy as np
import pytest

from src import runtime
from src.data.models import SampleMatrix
from src.data.synthetic import make_subspace_dataset
from src.solver.models import SolverConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def tight() -> SolverConfig:
    return SolverConfig(alpha=0.0, beta=0.0, rho=1.0, tol=1e-10, max_iter=20000)


@pytest.fixture
def subspace_data() -> SampleMatrix:
    # 10 классов, 5-мерные подпространства в R^50, по 40 образцов (20 атомов + 20 запросов)
    return make_subspace_dataset(10, 50, 5, 40, 0.05, seed=7)


@pytest.fixture
def threads(monkeypatch):
    def _set(value: str) -> None:
        monkeypatch.setenv("NSCR_THREADS", value)
        runtime.worker_count.cache_clear()

    yield _set
    runtime.worker_count.cache_clear()
