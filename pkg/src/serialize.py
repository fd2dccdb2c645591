"""JSON encoding: exact rationals, partitions, report dataclasses and checksummed table files."""

import dataclasses
import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, TableChecksumError, TableParseError, TableVersionError
from .partitions import IntPartition

logger = logging.getLogger(__name__)

TABLE_FORMAT_VERSION = 1
_SAFE_INT = 2 ** 53


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fraction_from_str(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise TableParseError(f"bad rational {text!r}") from e


def _key(k) -> str:
    if isinstance(k, IntPartition):
        return str(k)
    if isinstance(k, tuple):
        return "|".join(_key(x) for x in k)
    if isinstance(k, Fraction):
        return fraction_to_str(k)
    return str(k)


def to_jsonable(obj):
    """Recursively turn reports into plain JSON values; big ints and rationals become strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, IntPartition):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return fraction_to_str(obj)
    if isinstance(obj, (int, np.integer)):
        n = int(obj)
        return str(n) if abs(n) >= _SAFE_INT else n
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if dataclasses.is_dataclass(obj):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_") and f.repr
        }
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """Deterministic JSON text with sorted keys."""
    return json.dumps(to_jsonable(obj), indent=indent, sort_keys=True, ensure_ascii=False)


# ── Table files ──


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def checksum(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload)).hexdigest()


def write_table_file(path: Path, payload: dict) -> None:
    """Write payload plus format_version and checksum as UTF-8 JSON."""
    body = dict(payload, format_version=TABLE_FORMAT_VERSION)
    body["checksum"] = checksum(body)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(body, sort_keys=True, indent=1, ensure_ascii=False), encoding="utf-8")
    tmp.replace(path)
    logger.info("wrote %s", path)


def read_table_file(path: Path) -> dict:
    """Read a table file and check its version and checksum; returns the payload."""
    try:
        body = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InvalidInputError(f"{path}: no such table file") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise TableParseError(f"{path}: {e}") from e
    if not isinstance(body, dict):
        raise TableParseError(f"{path}: top level is not an object")
    version = body.get("format_version")
    if version != TABLE_FORMAT_VERSION:
        raise TableVersionError(f"{path}: format_version {version!r}, expected {TABLE_FORMAT_VERSION}")
    stored = body.pop("checksum", None)
    if stored is None:
        raise TableParseError(f"{path}: missing checksum")
    if stored != checksum(body):
        raise TableChecksumError(f"{path}: checksum mismatch")
    return body
