from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from src import consts
from src.data.models import SampleMatrix
from src.errors import DataError
from src.utils.xlogging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

_U64 = np.dtype("<u8")
_F64 = np.dtype("<f8")


def load_csv_dataset(path: PathLike) -> Tuple[SampleMatrix, List[str]]:
    """
    Читает CSV: первая строка - заголовок со столбцом `label`, остальные столбцы - признаки.
    Номера строк в ошибках - номера строк файла (заголовок = 1).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")

    try:
        raw = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError as e:
        raise DataError(f"empty dataset file: {path}") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataError(f"cannot parse {path}: {e}") from e

    header = [str(h).strip() for h in raw.iloc[0].tolist()]
    for i, name in enumerate(header):
        if not name:
            raise DataError("missing header name", row=1, column=f"#{i + 1}")
    seen = set()
    for name in header:
        if name in seen:
            raise DataError("duplicate header", row=1, column=name)
        seen.add(name)
    if consts.LABEL_COLUMN not in header:
        raise DataError("missing header", row=1, column=consts.LABEL_COLUMN)

    feature_names = [h for h in header if h != consts.LABEL_COLUMN]
    if not feature_names:
        raise DataError("no feature columns", row=1)

    body = raw.iloc[1:].reset_index(drop=True)
    body.columns = header
    if body.empty:
        raise DataError(f"zero samples in {path}")

    labels = [label.strip() for label in body[consts.LABEL_COLUMN].tolist()]
    for i, label in enumerate(labels):
        if not label:
            raise DataError("empty class label", row=i + 2, column=consts.LABEL_COLUMN)

    features = body[feature_names].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(features))
    if bad.size:
        r, c = bad[0]
        cell = body.iat[r, header.index(feature_names[c])]
        raise DataError(f"non-numeric cell {cell!r}", row=int(r) + 2, column=feature_names[c])

    matrix = SampleMatrix.from_labeled(features.T, labels)
    logger.info(
        f"Loaded {path.name}: D={matrix.dim}, N={matrix.n_samples}, K={matrix.n_classes}"
    )
    return matrix, matrix.labels()


def write_csv_dataset(matrix: SampleMatrix, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        matrix.values.T,
        columns=[f"f{i + 1}" for i in range(matrix.dim)],
    )
    frame.insert(0, consts.LABEL_COLUMN, matrix.labels())
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def write_binary_dataset(matrix: SampleMatrix, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    chunks = [
        consts.BINARY_MAGIC,
        np.array([matrix.dim, matrix.n_samples], dtype=_U64).tobytes(),
        matrix.values.astype(_F64).tobytes(order="F"),
        np.array([matrix.n_samples], dtype=_U64).tobytes(),
    ]
    for label in matrix.labels():
        encoded = label.encode("utf-8")
        chunks.append(np.array([len(encoded)], dtype=_U64).tobytes())
        chunks.append(encoded)
    path.write_bytes(b"".join(chunks))


def _read_u64(data: bytes, offset: int, what: str) -> Tuple[int, int]:
    if offset + 8 > len(data):
        raise DataError(f"truncated binary dataset while reading {what}")
    return int(np.frombuffer(data, dtype=_U64, count=1, offset=offset)[0]), offset + 8


def load_binary_dataset(path: PathLike) -> Tuple[SampleMatrix, List[str]]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    data = path.read_bytes()

    magic = consts.BINARY_MAGIC
    if data[: len(magic)] != magic:
        raise DataError(f"bad magic in {path}: expected {magic!r}")

    offset = len(magic)
    dim, offset = _read_u64(data, offset, "D")
    n, offset = _read_u64(data, offset, "N")
    payload = dim * n * 8
    if offset + payload > len(data):
        raise DataError(f"truncated binary dataset: expected {dim}x{n} values")
    values = np.frombuffer(data, dtype=_F64, count=dim * n, offset=offset)
    values = values.reshape((dim, n), order="F")
    offset += payload

    count, offset = _read_u64(data, offset, "label count")
    if count != n:
        raise DataError(f"label count {count} does not match N={n}")
    labels = []
    for i in range(count):
        length, offset = _read_u64(data, offset, f"label {i}")
        if offset + length > len(data):
            raise DataError(f"truncated binary dataset while reading label {i}")
        try:
            labels.append(data[offset: offset + length].decode("utf-8"))
        except UnicodeDecodeError as e:
            raise DataError(f"label {i} is not valid UTF-8: {e}") from e
        offset += length
    if offset != len(data):
        raise DataError(f"{len(data) - offset} trailing bytes after the label block in {path}")

    matrix = SampleMatrix.from_labeled(values, labels)
    logger.info(
        f"Loaded {path.name}: D={matrix.dim}, N={matrix.n_samples}, K={matrix.n_classes}"
    )
    return matrix, matrix.labels()


def load_dataset(path: PathLike) -> Tuple[SampleMatrix, List[str]]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    with open(path, "rb") as f:
        head = f.read(len(consts.BINARY_MAGIC))
    if head == consts.BINARY_MAGIC:
        return load_binary_dataset(path)
    return load_csv_dataset(path)
