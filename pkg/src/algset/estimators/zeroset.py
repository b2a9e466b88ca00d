"""Common zero set of a planar polynomial system by axis slicing."""

from __future__ import annotations

import numpy as np

from ..basis import monomials
from .polynomials import PolynomialSystem, restrict_to_line
from .roots import EVERYWHERE_ZERO, real_roots_univariate

__all__ = ["zero_set_slice_2d", "chain_points", "JOIN_TOL"]

JOIN_TOL = 1e-6


def _term_scale(system: PolynomialSystem, points: np.ndarray) -> np.ndarray:
    """``sum_i |c_i| |x^i|`` per point and polynomial: the magnitude the
    join tolerance is measured against."""
    mono = np.abs(monomials(points, system.basis.exponents))
    return mono @ np.abs(system.coeffs).T


def _slice(system, axis, values, span, tol_join, root_tol):
    basis = system.basis
    found = []
    for v in values:
        candidates = None
        for c in system.coeffs:
            roots = real_roots_univariate(restrict_to_line(c, basis, axis, v), span, root_tol)
            if roots is not EVERYWHERE_ZERO:
                candidates = roots
                break
        if candidates is None:
            # every polynomial vanishes on the whole line
            candidates = np.linspace(span[0], span[1], len(values))
        if candidates.size == 0:
            continue
        pts = np.empty((candidates.size, 2))
        pts[:, axis] = v
        pts[:, 1 - axis] = candidates
        values_at = np.abs(system(pts))
        ok = np.all(values_at <= tol_join * np.maximum(_term_scale(system, pts), 1e-300), axis=1)
        found.append(pts[ok])
    return np.vstack(found) if found else np.empty((0, 2))


def zero_set_slice_2d(system: PolynomialSystem, window, resolution: int,
                      tol_join: float = JOIN_TOL, root_tol: float = 1e-10) -> np.ndarray:
    """Points of the common zero set inside a planar window.

    Each of ``resolution`` abscissae fixes ``x`` and the restricted
    polynomials are solved in ``y``; the sweep is repeated with the axes
    swapped.  A root is kept when every polynomial of the system vanishes
    there to ``tol_join`` relative to its term magnitudes.

    Parameters
    ----------
    window : ((x_min, x_max), (y_min, y_max))
    resolution : int
        Grid lines per axis.

    Returns
    -------
    numpy.ndarray
        ``(m, 2)`` array, x-sweep points first.
    """
    if system.basis.d != 2:
        raise NotImplementedError("zero sets are only computed in the plane (d = 2)")
    (x0, x1), (y0, y1) = window
    if len(system) == 0:
        raise ValueError("empty polynomial system")
    xs = np.linspace(x0, x1, int(resolution))
    ys = np.linspace(y0, y1, int(resolution))
    a = _slice(system, 0, xs, (y0, y1), tol_join, root_tol)
    b = _slice(system, 1, ys, (x0, x1), tol_join, root_tol)
    return np.vstack([a, b])


def chain_points(points, max_gap: float) -> list:
    """Order a planar point sample into polylines.

    Greedy nearest-neighbour walks, each started from the point farthest
    from the first unvisited point; a walk ends when the next point is
    farther than ``max_gap``.  Returns ``(polyline, closed)`` pairs.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return []
    _, first = np.unique(np.round(pts, 12), axis=0, return_index=True)
    pts = pts[np.sort(first)]
    unvisited = np.ones(len(pts), dtype=bool)
    lines = []
    while unvisited.any():
        seed = int(np.flatnonzero(unvisited)[0])
        # reachable component, to pick an end point of open curves
        comp = np.zeros(len(pts), dtype=bool)
        comp[seed] = True
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            near = unvisited & ~comp & (np.linalg.norm(pts - pts[i], axis=1) <= max_gap)
            idx = np.flatnonzero(near)
            comp[idx] = True
            frontier.extend(idx.tolist())
        members = np.flatnonzero(comp)
        dist = np.linalg.norm(pts[members] - pts[seed], axis=1)
        current = int(members[int(np.argmax(dist))])
        order = [current]
        unvisited[current] = False
        while True:
            cand = np.flatnonzero(unvisited & comp)
            if cand.size == 0:
                break
            dist = np.linalg.norm(pts[cand] - pts[current], axis=1)
            k = int(np.argmin(dist))
            if dist[k] > max_gap:
                break
            current = int(cand[k])
            order.append(current)
            unvisited[current] = False
        line = pts[order]
        # points skipped by the walk but hugging it add nothing new
        rest = np.flatnonzero(unvisited & comp)
        if rest.size:
            gaps = np.min(np.linalg.norm(pts[rest, None, :] - line[None, :, :], axis=2), axis=1)
            unvisited[rest[gaps <= 0.5 * max_gap]] = False
        closed = len(order) > 2 and np.linalg.norm(line[0] - line[-1]) <= max_gap
        lines.append((line, bool(closed)))
    return lines
