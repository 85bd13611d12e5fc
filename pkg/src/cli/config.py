from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src import consts
from src.errors import ConfigError
from src.model_selection.presets import preset
from src.solver.models import GramMode, SolverConfig
from src.utils.dto import from_json
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

SWEEP_MODES = ("holdout", "cv")


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: str = ""
    test_dataset: Optional[str] = None
    coder: str = "nscr"
    cv: bool = False
    preset: Optional[str] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    lam: Optional[float] = None
    rho: float = consts.DEFAULT_RHO
    tol: float = consts.DEFAULT_TOL
    max_iter: int = consts.DEFAULT_MAX_ITER
    mode: Optional[GramMode] = None
    pca_dim: Optional[int] = None
    n_per_class: Optional[int] = None
    train_fraction: float = 0.5
    trials: int = 1
    seed: int = 0
    output: str = "results"
    folds: int = consts.DEFAULT_FOLDS
    alphas: List[float] = field(default_factory=lambda: list(consts.DEFAULT_GRID))
    betas: List[float] = field(default_factory=lambda: list(consts.DEFAULT_GRID))
    lams: List[float] = field(default_factory=lambda: list(consts.DEFAULT_LAMBDA_GRID))
    sweep_mode: str = "holdout"
    query_index: int = 0
    full_length: bool = False
    coders: List[str] = field(default_factory=lambda: ["nscr", "crc"])
    queries: int = 50
    include_precompute: bool = False

    def __post_init__(self) -> None:
        if not self.dataset:
            raise ConfigError("'dataset' is required")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.sweep_mode not in SWEEP_MODES:
            raise ConfigError(
                f"sweep_mode must be one of {', '.join(SWEEP_MODES)}, got '{self.sweep_mode}'"
            )
        if self.queries < 50:
            raise ConfigError(f"timing needs at least 50 queries, got {self.queries}")
        if self.query_index < 0:
            raise ConfigError(f"query_index must be >= 0, got {self.query_index}")
        if self.pca_dim is not None and self.pca_dim < 1:
            raise ConfigError(f"pca_dim must be positive, got {self.pca_dim}")
        if self.n_per_class is not None and self.n_per_class < 1:
            raise ConfigError(f"n_per_class must be positive, got {self.n_per_class}")
        if not self.coders:
            raise ConfigError("'coders' must name at least one coder")
        if self.preset is not None:
            preset(self.preset)

    def alpha_beta(self) -> Tuple[float, float]:
        """Явные alpha/beta важнее пресета, пресет важнее значений по умолчанию."""
        alpha, beta = consts.DEFAULT_ALPHA, consts.DEFAULT_BETA
        if self.preset is not None:
            alpha, beta = preset(self.preset)
        if self.alpha is not None:
            alpha = self.alpha
        if self.beta is not None:
            beta = self.beta
        return alpha, beta

    def solver_config(
        self, alpha: Optional[float] = None, beta: Optional[float] = None
    ) -> SolverConfig:
        default_alpha, default_beta = self.alpha_beta()
        return SolverConfig(
            alpha=default_alpha if alpha is None else alpha,
            beta=default_beta if beta is None else beta,
            rho=self.rho,
            tol=self.tol,
            max_iter=self.max_iter,
        )


def _key(raw: str) -> str:
    return raw.strip().replace("-", "_")


def parse_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Строки вида `key = value`; `#` начинает комментарий, пустые строки пропускаются.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e

    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        key = _key(key)
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        values[key] = value.strip()
    return values


def parse_flags(argv: Sequence[str]) -> Dict[str, str]:
    """`--key value`, `--key=value`; флаг без значения означает true."""
    values: Dict[str, str] = {}
    i = 0
    while i < len(argv):
        token = argv[i]
        if not token.startswith("--") or len(token) == 2:
            raise ConfigError(f"Unexpected argument {token!r}, expected --key value")
        body = token[2:]
        if "=" in body:
            key, value = body.split("=", 1)
            i += 1
        elif i + 1 < len(argv) and not argv[i + 1].startswith("--"):
            key, value = body, argv[i + 1]
            i += 2
        else:
            key, value = body, "true"
            i += 1
        values[_key(key)] = value
    return values


def load_spec(config_path: Optional[Union[str, Path]], flags: Sequence[str]) -> ExperimentSpec:
    merged: Dict[str, str] = {}
    if config_path is not None:
        merged.update(parse_config_file(config_path))
    merged.update(parse_flags(flags))
    spec = from_json(ExperimentSpec, merged)
    logger.debug(f"Experiment spec: {spec}")
    return spec
