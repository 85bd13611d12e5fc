#!/usr/bin/env python3
"""
Пишет синтетические наборы данных в CSV и пример конфига, чтобы прогнать
команды nscr без внешних датасетов:

    python scripts/make_fixture.py fixtures/
    scripts/nscr benchmark --config fixtures/example.conf
"""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from src import consts  # noqa: E402
from src.data.loaders import write_binary_dataset, write_csv_dataset  # noqa: E402
from src.data.synthetic import make_gaussian_atoms, make_subspace_dataset  # noqa: E402

EXAMPLE_CONFIG = """\
# nscr experiment config: key = value, '#' starts a comment
dataset = {dataset}
coder = nscr
preset = ar            # alpha = beta = 0.01
n_per_class = {atoms}
trials = 10
seed = 0
output = {output}

# sweep / cv
alphas = 0.001, 0.01, 0.05, 0.1, 0.5
betas = 0.001, 0.01, 0.05, 0.1, 0.5
folds = 5

# time
coders = nscr, crc, nrc, src
queries = 50
"""


# ---------------- Datasets ---------------- #
def write_subspace(out_dir: Path, seed: int) -> Path:
    n_classes, ambient, subspace, atoms, noise = consts.SUBSPACE_FIXTURE
    matrix = make_subspace_dataset(n_classes, ambient, subspace, 2 * atoms, noise, seed)
    path = out_dir / "subspace.csv"
    write_csv_dataset(matrix, path)
    return path


def write_gaussian(out_dir: Path, seed: int) -> Path:
    matrix = make_gaussian_atoms(*consts.GAUSSIAN_FIXTURE, seed)
    path = out_dir / "gaussian.nscrmat"
    write_binary_dataset(matrix, path)
    return path


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) >= 2 else Path("fixtures")
    seed = int(sys.argv[2]) if len(sys.argv) >= 3 else 0
    out_dir.mkdir(parents=True, exist_ok=True)

    subspace = write_subspace(out_dir, seed)
    gaussian = write_gaussian(out_dir, seed)

    config = out_dir / "example.conf"
    config.write_text(
        EXAMPLE_CONFIG.format(
            dataset=subspace.resolve(),
            atoms=consts.SUBSPACE_FIXTURE[3],
            output=(out_dir / "results").resolve(),
        ),
        encoding="utf-8",
    )

    result = {"subspace": str(subspace), "gaussian": str(gaussian), "config": str(config)}
    print(json.dumps(result, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
