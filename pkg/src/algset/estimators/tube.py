"""Semi-algebraic tube ``{x : |P_i(x)| <= lam for all i}``."""

from __future__ import annotations

import math

import numpy as np
from skimage import measure

from .polynomials import PolynomialSystem

__all__ = ["default_lambda", "tube_membership", "tube_field", "tube_contour_2d", "tube_grid_points"]


def default_lambda(n: float) -> float:
    """``ln(n) / sqrt(n)``."""
    if not n >= 2:
        raise ValueError(f"need n >= 2, got {n}")
    return math.log(n) / math.sqrt(n)


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")


def tube_membership(system: PolynomialSystem, x, lam: float):
    """True where ``max_i |P_i(x)| <= lam``; vectorized over ``(n, d)`` input."""
    _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    values = np.abs(system(x))
    inside = np.all(values <= lam, axis=1)
    return bool(inside[0]) if x.ndim == 1 else inside


def _grid(window, resolution):
    (x0, x1), (y0, y1) = window
    n = int(resolution)
    if n < 2:
        raise ValueError("resolution must be >= 2")
    return np.linspace(x0, x1, n), np.linspace(y0, y1, n)


def tube_field(system: PolynomialSystem, lam: float, window, resolution: int):
    """``F = max_i |P_i| - lam`` on a grid; ``F[row, col]`` sits at
    ``(xs[col], ys[row])``."""
    if system.basis.d != 2:
        raise NotImplementedError("tube contours are only computed in the plane (d = 2)")
    _check_lambda(lam)
    xs, ys = _grid(window, resolution)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    f = np.max(np.abs(system(pts)), axis=1) - lam
    return xs, ys, f.reshape(gy.shape)


def tube_contour_2d(system: PolynomialSystem, lam: float, window, resolution: int,
                    close: bool = False) -> list:
    """Boundary of the tube inside a window, by marching squares.

    Returns ``(polyline, closed)`` pairs in window coordinates.  Curves
    leaving the window are open unless ``close`` is set, in which case the
    window edge completes them (useful for filling the region).
    """
    xs, ys, f = tube_field(system, lam, window, resolution)
    offset = 0
    if close:
        f = np.pad(f, 1, constant_values=max(float(f.max()), 0.0) + 1.0)
        offset = 1
    out = []
    for c in measure.find_contours(f, 0.0):
        rows = np.clip(c[:, 0] - offset, 0, ys.size - 1)
        cols = np.clip(c[:, 1] - offset, 0, xs.size - 1)
        x = np.interp(cols, np.arange(xs.size), xs)
        y = np.interp(rows, np.arange(ys.size), ys)
        line = np.column_stack([x, y])
        closed = len(line) > 2 and np.array_equal(c[0], c[-1])
        out.append((line, bool(closed)))
    return out


def tube_grid_points(system: PolynomialSystem, lam: float, window, resolution: int) -> np.ndarray:
    """Grid nodes lying in the tube: a point sample of the region."""
    xs, ys, f = tube_field(system, lam, window, resolution)
    rows, cols = np.nonzero(f <= 0)
    return np.column_stack([xs[cols], ys[rows]])
