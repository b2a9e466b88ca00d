"""Hausdorff and truncated Painleve-Kuratowski distances between point samples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["PointCloud", "hausdorff", "directed_hausdorff", "pk_distance", "pk_record", "tail_bound"]

CHUNK = 1024


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim == 1:
            p = p[:, None] if p.size else p.reshape(0, 1)
        if not np.all(np.isfinite(p)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return self.points.shape[0]


def _points(a) -> np.ndarray:
    return a.points if isinstance(a, PointCloud) else PointCloud(a).points


def _pairwise(a, b):
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def directed_hausdorff(a, b) -> float:
    """``sup_{x in a} d(x, b)``."""
    a, b = _points(a), _points(b)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("Hausdorff distance needs nonempty point sets")
    worst = 0.0
    for s in range(0, len(a), CHUNK):
        worst = max(worst, float(_pairwise(a[s:s + CHUNK], b).min(axis=1).max()))
    return worst


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two nonempty finite sets."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def tail_bound(T: float) -> float:
    """``int_T^inf 2 t e^{-t} dt``: the most the truncated part can add."""
    return 2.0 * (T + 1.0) * math.exp(-T)


def _directed_profile(a, b, radii):
    """``sup_{x in a, |x|<=t} d(x, b ∩ B_t)`` for every ``t`` in ``radii``.

    ``-inf`` when ``a ∩ B_t`` is empty and ``inf`` when only ``b ∩ B_t`` is.
    """
    na, nb = np.linalg.norm(a, axis=1), np.linalg.norm(b, axis=1)
    order = np.argsort(nb, kind="stable")
    b, nb = b[order], nb[order]
    kb = np.searchsorted(nb, radii, side="right")
    out = np.full(radii.shape, -np.inf)
    for s in range(0, len(a), CHUNK):
        rows = a[s:s + CHUNK]
        near = np.minimum.accumulate(_pairwise(rows, b), axis=1)
        near = np.concatenate([np.full((len(rows), 1), np.inf), near], axis=1)
        vals = near[:, kb]
        vals[na[s:s + CHUNK, None] > radii[None, :]] = -np.inf
        out = np.maximum(out, vals.max(axis=0))
    return out


def pk_distance(a, b, T: float = 5.0, nodes: int = 256) -> float:
    """Truncated Painleve-Kuratowski distance between two point samples.

    Trapezoidal rule for ``int_0^T d_H(a ∩ B_t, b ∩ B_t) e^{-t} dt`` with
    balls centred at the origin.  Both restrictions empty contribute 0;
    exactly one empty contributes the ball diameter ``2t``.  The tail
    beyond ``T`` is not included; see :func:`tail_bound`.  The radius at
    which each sample first meets the ball is added to the grid, with a
    node just below it, so the jump there does not smear across a panel.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if nodes < 8:
        raise ValueError("need at least 8 quadrature nodes")
    a, b = _points(a), _points(b)
    if len(a) == 0 and len(b) == 0:
        return 0.0
    t = np.linspace(0.0, T, int(nodes))
    entry = [float(np.linalg.norm(p, axis=1).min()) for p in (a, b) if len(p)]
    entry = [r for r in entry if 0.0 < r < T]
    t = np.unique(np.concatenate([t, entry, [np.nextafter(r, -np.inf) for r in entry]]))
    if len(a) == 0 or len(b) == 0:
        prof = np.full(t.shape, np.inf)
        empty_a = np.full(t.shape, len(a) == 0)
        empty_b = ~empty_a
        if len(a):
            empty_a = np.linalg.norm(a, axis=1).min() > t
        if len(b):
            empty_b = np.linalg.norm(b, axis=1).min() > t
    else:
        ab = _directed_profile(a, b, t)
        ba = _directed_profile(b, a, t)
        prof = np.maximum(ab, ba)
        empty_a = ab == -np.inf
        empty_b = ba == -np.inf
    value = np.where(empty_a & empty_b, 0.0, np.where(empty_a | empty_b, 2.0 * t, prof))
    return float(np.trapezoid(value * np.exp(-t), t))


def pk_record(a, b, T: float = 5.0, nodes: int = 256) -> dict:
    return {
        "metric": "pk",
        "value": pk_distance(a, b, T, nodes),
        "T": float(T),
        "nodes": int(nodes),
        "tail_bound": tail_bound(T),
        "empty_convention": "one side empty contributes 2t",
    }
