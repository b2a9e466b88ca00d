"""CSV and JSON readers and writers with round-trip float printing."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = [
    "write_points_csv",
    "read_points_csv",
    "latent_path",
    "sidecar_path",
    "write_json",
    "read_json",
    "write_matrix_csv",
    "write_polylines_csv",
    "read_polylines_csv",
]


def _fmt(v) -> str:
    # repr of a Python float is the shortest string that round-trips
    return repr(float(v))


def latent_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".latent" + p.suffix)


def sidecar_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".json")


def write_points_csv(path, points, names=None) -> None:
    """Header ``x1,...,xd`` (or ``names``), then one row per point."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array")
    names = names or [f"x{j + 1}" for j in range(pts.shape[1])]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for row in pts:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_points_csv(path, columns=None) -> np.ndarray:
    """Read a headed CSV of floats; ``columns`` selects by header name."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = [r for r in reader if r]
    if columns is None:
        idx = list(range(len(header)))
    else:
        missing = [c for c in columns if c not in header]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        idx = [header.index(c) for c in columns]
    try:
        data = np.array([[float(r[i]) for i in idx] for r in rows], dtype=float)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed row ({exc})") from None
    if data.size == 0:
        return np.empty((0, len(idx)))
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite value")
    return data


def write_polylines_csv(path, polylines) -> None:
    """Rows ``x,y,branch`` for a list of point arrays."""
    with open(path, "w", newline="") as fh:
        fh.write("x,y,branch\n")
        for b, line in enumerate(polylines):
            for x, y in np.asarray(line, dtype=float).reshape(-1, 2):
                fh.write(f"{_fmt(x)},{_fmt(y)},{b}\n")


def read_polylines_csv(path) -> list:
    """Inverse of :func:`write_polylines_csv`; files without a ``branch``
    column come back as one branch."""
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
    if header == [""]:
        return []
    if "branch" not in header:
        pts = read_points_csv(path)
        return [pts[:, :2]] if len(pts) else []
    data = read_points_csv(path, ["x", "y", "branch"])
    out = []
    for b in np.unique(data[:, 2]):
        out.append(data[data[:, 2] == b, :2])
    return out


def write_matrix_csv(path, matrix, labels=None) -> None:
    m = np.asarray(matrix, dtype=float)
    with open(path, "w", newline="") as fh:
        if labels is not None:
            fh.write(",".join(labels) + "\n")
        for row in m:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path, data) -> None:
    """Sorted keys and fixed indentation, so equal data gives equal bytes."""
    text = json.dumps(data, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
