from typing import Final, List, Tuple

# ADMM defaults
DEFAULT_RHO: Final[float] = 10.0
DEFAULT_TOL: Final[float] = 1e-3
DEFAULT_MAX_ITER: Final[int] = 20

DEFAULT_ALPHA: Final[float] = 0.01
DEFAULT_BETA: Final[float] = 0.01

# Baselines
DEFAULT_CRC_LAMBDA: Final[float] = 1e-3
DEFAULT_SRC_LAMBDA: Final[float] = 1e-3

# Cross-validation
DEFAULT_FOLDS: Final[int] = 5
DEFAULT_GRID: Final[List[float]] = [0.001, 0.01, 0.05, 0.1, 0.5]
DEFAULT_LAMBDA_GRID: Final[List[float]] = [0.0001, 0.001, 0.01, 0.1]

# Oracle
ORACLE_STEP_TOL: Final[float] = 1e-10
ORACLE_MAX_STEPS: Final[int] = 1_000_000
ORACLE_BACKTRACK: Final[float] = 0.5
ACTIVE_SET_MAX_N: Final[int] = 12

# Numerics
ZERO_NORM_EPS: Final[float] = 1e-12

# Data formats
LABEL_COLUMN: Final[str] = "label"
BINARY_MAGIC: Final[bytes] = b"NSCRMAT1"

# Artifacts
TRIALS_CSV: Final[str] = "trials.csv"
SUMMARY_CSV: Final[str] = "summary.csv"
PREDICTIONS_CSV: Final[str] = "predictions.csv"
TRIAL_TIMING_CSV: Final[str] = "trial_timing.csv"
SWEEP_CSV: Final[str] = "sweep.csv"
CV_CSV: Final[str] = "cv.csv"
CONVERGENCE_CSV: Final[str] = "convergence.csv"
TIMING_CSV: Final[str] = "timing.csv"

# Environment
THREADS_ENV: Final[str] = "NSCR_THREADS"
LOG_LEVEL_ENV: Final[str] = "NSCR_LOG_LEVEL"
LOG_FILE_ENV: Final[str] = "NSCR_LOG_FILE"

# Synthetic fixtures: (classes, ambient dim, subspace dim, atoms per class, noise)
SUBSPACE_FIXTURE: Final[Tuple[int, int, int, int, float]] = (10, 50, 5, 20, 0.05)
# (classes, ambient dim, atoms per class)
GAUSSIAN_FIXTURE: Final[Tuple[int, int, int]] = (10, 2048, 50)
