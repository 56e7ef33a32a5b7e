"""CSV and JSON readers and writers.

Floats are written with 17 significant digits, enough to round-trip, so
every file reads back bit-exactly.
"""

from __future__ import annotations

import contextlib
import csv
import json
from pathlib import Path

import numpy as np

from .dist import DistributionModel, model_from_dict
from .empirical import EmpiricalSample
from .exceptions import ValidationError
from .grid import GridFunction, LevelGrid
from .limit import CovarianceMatrix


@contextlib.contextmanager
def _sink(target):
    """Yield a text handle for a path or pass an open handle through."""
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="") as fh:
            yield fh


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _read_rows(path):
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row]


def _parse_float(text: str, path, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{path}:{line}: not a number: {text!r}") from None


def write_sample(sample, path, header: bool = True):
    values = sample.values if isinstance(sample, EmpiricalSample) else np.asarray(sample, dtype=float)
    with _sink(path) as fh:
        if header:
            fh.write("y\n")
        fh.writelines(_fmt(v) + "\n" for v in values)


def read_sample(path) -> EmpiricalSample:
    """One value per line, with an optional ``y`` header."""
    rows = _read_rows(path)
    if rows and rows[0][0].strip() == "y":
        rows = rows[1:]
    return EmpiricalSample([_parse_float(r[0], path, i + 2) for i, r in enumerate(rows)])


def write_grid_function(f: GridFunction, path, label: str | None = None):
    label = label or f.label
    with _sink(path) as fh:
        fh.write(f"{label},value\n")
        fh.writelines(f"{_fmt(t)},{_fmt(v)}\n" for t, v in zip(f.points, f.values))


def read_grid_function(path) -> GridFunction:
    rows = _read_rows(path)
    if not rows or len(rows[0]) != 2 or rows[0][1].strip() != "value":
        raise ValidationError(f"{path}: expected a '<level>,value' header")
    label = rows[0][0].strip()
    data = np.array([[_parse_float(x, path, i + 2) for x in r] for i, r in enumerate(rows[1:])])
    if data.size == 0:
        raise ValidationError(f"{path}: no data rows")
    return GridFunction(data[:, 0], data[:, 1], label=label)


def write_mc_result(result, path):
    with _sink(path) as fh:
        fh.write("rep,statistic\n")
        fh.writelines(f"{int(r)},{_fmt(s)}\n" for r, s in zip(result.stream_indices, result.statistics))


def read_mc_statistics(path) -> tuple[np.ndarray, np.ndarray]:
    """Return (rep indices, statistics) from a ``rep,statistic`` CSV."""
    rows = _read_rows(path)
    if not rows or [c.strip() for c in rows[0]] != ["rep", "statistic"]:
        raise ValidationError(f"{path}: expected a 'rep,statistic' header")
    reps = np.array([int(r[0]) for r in rows[1:]], dtype=np.int64)
    stats = np.array([_parse_float(r[1], path, i + 2) for i, r in enumerate(rows[1:])])
    return reps, stats


def write_covariance(cov: CovarianceMatrix, path):
    """Dense row-major matrix below a header row of grid points."""
    with _sink(path) as fh:
        fh.write(",".join(_fmt(t) for t in cov.grid.points) + "\n")
        for row in cov.entries:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_covariance(path) -> CovarianceMatrix:
    rows = _read_rows(path)
    pts = np.array([float(x) for x in rows[0]])
    grid = LevelGrid(pts[0], pts[-1], pts.size)
    return CovarianceMatrix(grid, np.array([[float(x) for x in r] for r in rows[1:]]))


def write_model(model: DistributionModel, path):
    Path(path).write_text(model.to_json() + "\n")


def read_model(path) -> DistributionModel:
    return model_from_dict(json.loads(Path(path).read_text()))


def write_json(obj, path):
    data = obj.to_dict() if hasattr(obj, "to_dict") else obj
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


__all__ = [
    "write_sample",
    "read_sample",
    "write_grid_function",
    "read_grid_function",
    "write_mc_result",
    "read_mc_statistics",
    "write_covariance",
    "read_covariance",
    "write_model",
    "read_model",
    "write_json",
]
