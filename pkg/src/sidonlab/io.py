"""Set files, JSON reports and CSV tables.

Set file: one decimal integer per line, strictly increasing, with ``#``
header lines such as ``# n=10200`` and ``# family=bose``.

Reports are JSON objects ``{"schema_version", "kind", "config", "data"}``
where ``data`` mirrors the dataclasses field for field.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import sys
import tempfile
import types
import typing
from pathlib import Path

from . import core, primes, search
from .core import SidonSet

SCHEMA_VERSION = 1

# Report classes that may appear under "data", by name.
REPORT_TYPES = {
    cls.__name__: cls
    for cls in (
        core.SidonSet, core.VerificationResult, core.DefectValue, core.DiscrepancyReport,
        core.SweepResult, core.ElementErrorRecord, core.ElementErrorSummary,
        core.PowerSumRecord, core.DingReport,
        search.SearchResult, search.DefectRecord,
        primes.ExceptionReport, primes.ExceptionalInterval, primes.GapExponentReport,
        primes.HeathBrownReport,
    )
}


# --------------------------------------------------------------------------
# Set files


def format_set(A: SidonSet) -> str:
    lines = [f"# n={A.n}"]
    if A.family:
        lines.append(f"# family={A.family}")
    lines.extend(str(a) for a in A.elements)
    return "\n".join(lines) + "\n"


def parse_set(text: str) -> tuple[tuple[int, ...], int | None, str | None]:
    """Return (elements, n, family) without verifying the Sidon property."""
    elems: list[int] = []
    n = family = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, sep, value = token.partition("=")
                if not sep:
                    continue
                if key == "n":
                    n = int(value)
                elif key == "family":
                    family = value
            continue
        try:
            elems.append(int(line))
        except ValueError:
            raise ValueError(f"line {lineno}: expected an integer, got {line!r}") from None
    return tuple(elems), n, family


def read_set(path: str | os.PathLike, verify: bool = True) -> SidonSet:
    elems, n, family = parse_set(_read_text(path))
    if n is None:
        n = elems[-1] if elems else 1
    if verify:
        return SidonSet.from_elements(elems, n, family=family)
    return SidonSet(elems, n, False, family)


def _read_text(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text()


# --------------------------------------------------------------------------
# JSON


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def report(kind: str, data, config: dict | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": to_jsonable(config or {}),
        "data": to_jsonable(data),
    }


def _convert(hint, value):
    if value is None:
        return None
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if origin in (typing.Union, types.UnionType):
        options = [a for a in args if a is not type(None)]
        if isinstance(value, list):
            seq = [a for a in options if typing.get_origin(a) is tuple]
            return _convert(seq[0], value) if seq else tuple(value)
        if isinstance(value, dict):
            dc = [a for a in options if dataclasses.is_dataclass(a)]
            return from_dict(dc[0], value)
        if isinstance(value, int) and float in options and int not in options:
            return float(value)
        return value
    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_convert(args[0], v) for v in value)
        return tuple(_convert(a, v) for a, v in zip(args, value))
    if dataclasses.is_dataclass(hint):
        return from_dict(hint, value)
    if hint is float and isinstance(value, int):
        return float(value)
    return value


def from_dict(cls, data: dict):
    """Rebuild a report dataclass from its JSON form."""
    hints = typing.get_type_hints(cls)
    kwargs = {f.name: _convert(hints[f.name], data[f.name])
              for f in dataclasses.fields(cls) if f.name in data}
    return cls(**kwargs)


def load_report(path_or_text) -> tuple[dict, object]:
    """Parse a report; returns (envelope, typed data).

    ``data`` becomes a dataclass (or a tuple of them) when its type is
    recorded in ``envelope["type"]``.
    """
    text = path_or_text
    if not str(path_or_text).lstrip().startswith("{"):
        text = _read_text(path_or_text)
    env = json.loads(text)
    cls = REPORT_TYPES.get(env.get("type", ""))
    data = env["data"]
    if cls is not None:
        data = tuple(from_dict(cls, d) for d in data) if isinstance(data, list) else from_dict(cls, data)
    return env, data


def typed_report(kind: str, data, config: dict | None = None) -> dict:
    env = report(kind, data, config)
    sample = data[0] if isinstance(data, (list, tuple)) and data else data
    if dataclasses.is_dataclass(sample):
        env["type"] = type(sample).__name__
    return env


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# --------------------------------------------------------------------------
# CSV


def to_csv(records) -> str:
    records = list(records)
    buf = io.StringIO()
    if not records:
        return ""
    names = [f.name for f in dataclasses.fields(records[0])]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in records:
        row = []
        for name in names:
            v = to_jsonable(getattr(r, name))
            row.append(json.dumps(v) if isinstance(v, (list, dict)) else v)
        writer.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------
# Output


def write_output(path, text: str) -> None:
    """Write ``text`` to ``path`` (``-`` or None for stdout) via temp file + rename."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
