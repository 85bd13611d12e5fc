from typing import Dict, Tuple

from src.errors import ConfigError

# (alpha, beta), подобранные кросс-валидацией для каждого набора данных
PRESETS: Dict[str, Tuple[float, float]] = {
    "ar": (0.01, 0.01),
    "extended_yale_b": (0.05, 0.01),
    "usps": (0.01, 0.05),
    "mnist": (0.05, 0.05),
    "stanford40": (0.05, 0.1),
    "caltech256": (0.01, 0.05),
    "cub200": (0.1, 0.01),
    "flowers102": (0.01, 0.1),
    "aircraft": (0.05, 0.05),
    "cars": (0.05, 0.01),
}


def _canonical(name: str) -> str:
    return name.strip().lower().replace("-", "_").replace(" ", "_")


def preset(dataset_name: str) -> Tuple[float, float]:
    key = _canonical(dataset_name)
    if key not in PRESETS:
        available = ", ".join(sorted(PRESETS))
        raise ConfigError(f"Unknown preset '{dataset_name}', available: {available}")
    return PRESETS[key]
