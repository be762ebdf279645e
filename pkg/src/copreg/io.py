"""CSV reading and writing with reproducible number formatting.

Floats are written with ``repr`` (the shortest string that round-trips), so
identical results always give byte-identical files.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from copreg.errors import ConfigError


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_value(v) for v in row])
    return path


def dataset_header(d: int) -> list[str]:
    return ["y"] + [f"x{j + 1}" for j in range(d)]


def write_dataset(path, data) -> Path:
    data = np.asarray(data, dtype=float)
    return write_csv(path, dataset_header(data.shape[1] - 1), data.tolist())


def load_dataset(path) -> np.ndarray:
    """Read a ``y,x1[,x2]`` CSV file into an ``(n, d + 1)`` array.

    Raises :class:`~copreg.errors.ConfigError` for a missing or empty file,
    a bad header, or a malformed row (reported with its 1-based line number).
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such file")
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ConfigError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    if header not in (dataset_header(1), dataset_header(2)):
        raise ConfigError(f"{path}:1: header must be 'y,x1' or 'y,x1,x2', got {lines[0]!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise ConfigError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}"
            )
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"{path}:{lineno}: non-finite value in {line!r}")
        rows.append(vals)
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return np.array(rows, dtype=float)
