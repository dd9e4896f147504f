"""Flat ``key = value`` configuration files.

Values may be quoted strings, numbers, booleans, ``[a, b, ...]`` lists or
``a:b:step`` ranges (end included when it falls within half a step). Anything
else is kept as a bare string, so spec strings such as ``lambda:2`` survive.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from unit_field_lab.errors import ConfigurationError
from unit_field_lab.log import get_logger

logger = get_logger(__name__)

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")

Value = Union[str, int, float, bool, List[Any]]


def _strip_comment(line: str) -> str:
    quote: Optional[str] = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _split_list(body: str) -> List[str]:
    items, current, quote = [], [], None
    for ch in body:
        if quote:
            current.append(ch)
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
            current.append(ch)
        elif ch == ",":
            items.append("".join(current))
            current = []
        else:
            current.append(ch)
    if quote:
        raise ConfigurationError(f"Unterminated string in list [{body}]")
    tail = "".join(current)
    if tail.strip() or items:
        items.append(tail)
    return [item.strip() for item in items]


def _number(text: str) -> Union[int, float]:
    if re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    return float(text)


def expand_range(start: float, stop: float, step: float) -> List[float]:
    """start, start+step, ... up to stop (inclusive within half a step)."""
    if step == 0 or not all(math.isfinite(x) for x in (start, stop, step)):
        raise ConfigurationError(f"Invalid range {start}:{stop}:{step}")
    if (stop - start) * step < 0:
        raise ConfigurationError(f"Range {start}:{stop}:{step} never reaches its end")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [start + i * step for i in range(count)]


def parse_value(text: str) -> Value:
    text = text.strip()
    if not text:
        raise ConfigurationError("Empty value")
    if text[0] in "\"'":
        if len(text) < 2 or text[-1] != text[0]:
            raise ConfigurationError(f"Unterminated string {text}")
        return text[1:-1]
    if text.startswith("["):
        if not text.endswith("]"):
            raise ConfigurationError(f"Unterminated list {text}")
        return [parse_value(item) for item in _split_list(text[1:-1])]
    lowered = text.lower()
    if lowered in {"true", "false"}:
        return lowered == "true"
    if _NUMBER.match(text):
        return _number(text)
    parts = text.split(":")
    if len(parts) == 3 and all(_NUMBER.match(part.strip()) for part in parts):
        return expand_range(*(float(part) for part in parts))
    return text


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, Value]:
    values: Dict[str, Value] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not _KEY.match(key):
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        if key in values:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key '{key}'")
        try:
            values[key] = parse_value(value)
        except ConfigurationError as e:
            raise ConfigurationError(f"{source}:{lineno}: {e}") from e
    return values


def load_config_file(path: Union[str, Path]) -> Dict[str, Value]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e
    values = parse_config_text(text, source=str(path))
    logger.debug(f"Loaded config {path}", extra={"extra_data": {"keys": sorted(values)}})
    return values


def merge_overrides(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """File keys overridden by flags; None means the flag was not given."""
    merged = dict(base)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return merged
