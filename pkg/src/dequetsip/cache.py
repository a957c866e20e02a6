"""On-disk series cache.

A cached series is a JSON object::

    {"name": "P", "order": 20, "coeffs": ["1", "1", "2", ...]}

with every coefficient an exact decimal ``"p"`` or ``"p/q"`` string.  The
writer is canonical (fixed key order, one line), so rewriting a file that it
produced reproduces the same bytes.  A legacy layout with one coefficient per
line is accepted for reading.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

from .series import TruncatedSeries, format_rational, parse_rational

CACHE_ENV = "DEQUETSIP_CACHE"


class CacheFormatError(ValueError):
    pass


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "dequetsip"))


def dumps_series(name: str, s: TruncatedSeries) -> str:
    obj = {"name": name, "order": s.order, "coeffs": [format_rational(c) for c in s.coeffs]}
    return json.dumps(obj) + "\n"


def loads_series(text: str, *, integral: bool = False, source: str = "<string>") -> tuple[str, TruncatedSeries]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CacheFormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise CacheFormatError(f"{source}: top level must be an object")
    for key, kind in (("name", str), ("order", int), ("coeffs", list)):
        if not isinstance(obj.get(key), kind) or isinstance(obj.get(key), bool):
            raise CacheFormatError(f"{source}: field {key!r} missing or not a {kind.__name__}")
    order, raw = obj["order"], obj["coeffs"]
    if len(raw) != order + 1:
        raise CacheFormatError(f"{source}: field 'coeffs' has {len(raw)} entries, order {order} needs {order + 1}")
    coeffs = [_parse(c, f"{source}: coeffs[{i}]", integral) for i, c in enumerate(raw)]
    return obj["name"], TruncatedSeries(coeffs, order)


def loads_lines(text: str, *, integral: bool = False, source: str = "<string>") -> TruncatedSeries:
    """Legacy layout: coefficient i on the i-th non-blank line."""
    coeffs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if line:
            coeffs.append(_parse(line, f"{source}: line {lineno}", integral))
    if not coeffs:
        raise CacheFormatError(f"{source}: no coefficients")
    return TruncatedSeries(coeffs)


def _parse(value, where: str, integral: bool) -> Fraction:
    try:
        x = parse_rational(value)
    except ValueError:
        raise CacheFormatError(f"{where}: not an exact rational string: {value!r}") from None
    if integral and x.denominator != 1:
        raise CacheFormatError(f"{where}: expected an integer, got {value!r}")
    return x


def write_series(path: str | Path, name: str, s: TruncatedSeries) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps_series(name, s))
    tmp.replace(path)
    return path


def read_series(path: str | Path, *, fmt: str = "json", integral: bool = False) -> tuple[str, TruncatedSeries]:
    path = Path(path)
    text = path.read_text()
    if fmt == "lines":
        return path.stem, loads_lines(text, integral=integral, source=str(path))
    return loads_series(text, integral=integral, source=str(path))


def cached_path(cache_dir: str | Path, name: str, order: int) -> Path:
    return Path(cache_dir) / f"{name}_{order}.json"


def find_cached(cache_dir: str | Path | None, name: str, order: int) -> TruncatedSeries | None:
    """A cached series of at least ``order`` terms, truncated to ``order``."""
    if cache_dir is None:
        return None
    best = None
    for p in Path(cache_dir).glob(f"{name}_*.json"):
        try:
            n = int(p.stem.rsplit("_", 1)[1])
        except ValueError:
            continue
        if n >= order and (best is None or n < best[0]):
            best = (n, p)
    if best is None:
        return None
    return read_series(best[1])[1].truncate(order)
