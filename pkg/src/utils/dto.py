from dataclasses import asdict, fields, is_dataclass
from enum import Enum
from typing import Any, Dict, List, Type, TypeVar, Union, get_args, get_origin, get_type_hints

from src.errors import ConfigError

T = TypeVar("T")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}
_NONE = {"", "none", "null"}


def to_json(obj: Any) -> Dict[str, Any]:
    return asdict(obj)


def _coerce(ftype: Any, value: Any, name: str) -> Any:
    origin = get_origin(ftype)
    args = get_args(ftype)

    if origin is Union:
        if value is None or (isinstance(value, str) and value.strip().lower() in _NONE):
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(inner[0], value, name)

    if origin in (list, List):
        if isinstance(value, str):
            items = [item.strip() for item in value.split(",") if item.strip()]
        else:
            items = list(value)
        return [_coerce(args[0], item, name) for item in items]

    if is_dataclass(ftype):
        return from_json(ftype, value)

    if ftype is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise ConfigError(f"Invalid boolean for '{name}': {value!r}")

    if isinstance(ftype, type) and issubclass(ftype, Enum):
        try:
            return ftype(value)
        except ValueError as e:
            raise ConfigError(f"Invalid value for '{name}': {value!r}") from e

    if ftype in (int, float, str):
        if isinstance(value, str):
            value = value.strip()
        try:
            return ftype(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(
                f"Invalid value for '{name}': {value!r} (expected {ftype.__name__})"
            ) from e

    return value


def from_json(cls: Type[T], data: Dict[str, Any]) -> T:
    """
    Собирает dataclass из словаря. Строковые значения (из конфиг-файла или флагов)
    приводятся к типам полей; отсутствующие ключи получают значения по умолчанию.
    """
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown keys for {cls.__name__}: {', '.join(unknown)}")

    hints = get_type_hints(cls)
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        kwargs[f.name] = _coerce(hints[f.name], data[f.name], f.name)

    return cls(**kwargs)
