"""Landmark file formats.

Native format::

    k n
    x y        <- k lines per object, n objects, objects back to back
    ...

Blank lines and lines starting with ``#`` are ignored, except that a blank
line inside an object (after fewer than k of its rows) is a ShapeMismatch.

CSV format: header ``object,landmark,x,y`` then one row per landmark. Rows of
one object need not be contiguous; objects keep the order in which they first
appear and landmarks are ordered by their integer index. Numbers are plain decimals with a dot separator in every locale.
"""

from __future__ import annotations

import csv
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, ParseError, ShapeMismatch
from .shape_core import MAX_LANDMARKS, KAd, Shape, to_preshape

DATA_DIR_ENV = "SHAPESTAT_DATA_DIR"

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INT = re.compile(r"\d+\Z")


@dataclass(frozen=True, eq=False)
class LandmarkFile:
    objects: np.ndarray  # (n, k) complex
    label: str = "sample"

    def __post_init__(self):
        obj = np.array(self.objects, dtype=complex)
        if obj.ndim != 2 or obj.shape[0] < 1:
            raise InputError("a landmark file needs at least one object")
        for i, row in enumerate(obj):
            try:
                to_preshape(KAd(row))
            except InputError as exc:
                raise InputError(f"object {i + 1}: {exc}") from exc
        obj.setflags(write=False)
        object.__setattr__(self, "objects", obj)

    @property
    def n(self) -> int:
        return self.objects.shape[0]

    @property
    def k(self) -> int:
        return self.objects.shape[1]

    def kads(self) -> list[KAd]:
        return [KAd(row) for row in self.objects]

    def shapes(self) -> list[Shape]:
        return [Shape(to_preshape(KAd(row))) for row in self.objects]


def _number(tok: str, line: int) -> float:
    if not _NUMBER.match(tok):
        raise ParseError(f"not a decimal number: {tok!r}", line)
    return float(tok)


def _parse_native(lines: Sequence[str], label: str) -> LandmarkFile:
    rows = iter(enumerate(lines, start=1))
    header = None
    for lineno, raw in rows:
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != 2 or not all(_INT.match(p) for p in parts):
            raise ParseError("header must be two integers 'k n'", lineno)
        header = (int(parts[0]), int(parts[1]), lineno)
        break
    if header is None:
        raise ParseError("empty file", 1)
    k, n, hline = header
    if k <= 2 or k > MAX_LANDMARKS:
        raise ParseError(f"k must satisfy 2 < k <= {MAX_LANDMARKS}, got {k}", hline)
    if n < 1:
        raise ParseError("n must be at least 1", hline)

    objects = []
    current: list[complex] = []
    last = hline
    for lineno, raw in rows:
        last = lineno
        text = raw.strip()
        if text.startswith("#"):
            continue
        if not text:
            if current:
                raise ShapeMismatch(
                    f"object {len(objects) + 1} has {len(current)} landmarks, expected {k}", lineno
                )
            continue
        parts = text.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'x y', got {len(parts)} fields", lineno)
        if len(objects) == n:
            raise ShapeMismatch(f"more data than the {n} objects declared in the header", lineno)
        current.append(complex(_number(parts[0], lineno), _number(parts[1], lineno)))
        if len(current) == k:
            objects.append(current)
            current = []
    if current:
        raise ShapeMismatch(f"object {len(objects) + 1} has {len(current)} landmarks, expected {k}", last)
    if len(objects) != n:
        raise ShapeMismatch(f"header declares {n} objects, found {len(objects)}", last)
    return LandmarkFile(np.array(objects), label)


def _parse_csv(lines: Sequence[str], label: str) -> LandmarkFile:
    reader = csv.reader(lines)
    header = None
    for row in reader:
        if row and any(c.strip() for c in row):
            header = [c.strip().lower() for c in row]
            break
    if header != ["object", "landmark", "x", "y"]:
        raise ParseError("CSV header must be 'object,landmark,x,y'", reader.line_num or 1)
    objects: dict[str, dict[int, complex]] = {}
    first_line: dict[str, int] = {}
    for row in reader:
        lineno = reader.line_num
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
        obj, lm, x, y = (c.strip() for c in row)
        if not _INT.match(lm):
            raise ParseError(f"landmark index must be a nonnegative integer, got {lm!r}", lineno)
        marks = objects.setdefault(obj, {})
        first_line.setdefault(obj, lineno)
        if int(lm) in marks:
            raise ParseError(f"duplicate landmark {lm} for object {obj!r}", lineno)
        marks[int(lm)] = complex(_number(x, lineno), _number(y, lineno))
    if not objects:
        raise ParseError("no data rows", reader.line_num)
    names = list(objects)
    k = len(objects[names[0]])
    for name in names:
        if len(objects[name]) != k:
            raise ShapeMismatch(
                f"object {name!r} has {len(objects[name])} landmarks, expected {k}", first_line[name]
            )
    if k <= 2 or k > MAX_LANDMARKS:
        raise ParseError(f"k must satisfy 2 < k <= {MAX_LANDMARKS}, got {k}", first_line[names[0]])
    arr = np.array([[objects[name][i] for i in sorted(objects[name])] for name in names])
    return LandmarkFile(arr, label)


def parse_landmarks(path, format: str = "native", label: Optional[str] = None) -> LandmarkFile:
    path = Path(path)
    label = label or path.stem
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if format == "native":
        return _parse_native(lines, label)
    if format == "csv":
        return _parse_csv(lines, label)
    raise InputError(f"unknown landmark format {format!r}")


def format_landmarks(lf: LandmarkFile, format: str = "native") -> str:
    # repr gives the shortest string that round-trips to the same double
    out = []
    if format == "native":
        out.append(f"{lf.k} {lf.n}")
        for row in lf.objects:
            out.extend(f"{repr(float(z.real))} {repr(float(z.imag))}" for z in row)
    elif format == "csv":
        out.append("object,landmark,x,y")
        for i, row in enumerate(lf.objects, start=1):
            out.extend(f"{i},{j},{repr(float(z.real))},{repr(float(z.imag))}" for j, z in enumerate(row, start=1))
    else:
        raise InputError(f"unknown landmark format {format!r}")
    return "\n".join(out) + "\n"


def write_landmarks(lf: LandmarkFile, path, format: str = "native") -> None:
    Path(path).write_text(format_landmarks(lf, format), encoding="utf-8")


def resolve_path(path) -> Path:
    """``path`` itself if it exists, else the same relative path under :func:`data_dir`."""
    path = Path(path)
    if path.exists() or path.is_absolute():
        return path
    alt = data_dir() / path
    return alt if alt.exists() else path


def data_dir(default: Optional[Path] = None) -> Path:
    """Root for external datasets: ``$SHAPESTAT_DATA_DIR`` or ``default``."""
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return default if default is not None else Path.cwd() / "data" / "external"
