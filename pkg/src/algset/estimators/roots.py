"""Real roots of univariate polynomials by Sturm-sequence isolation."""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

__all__ = ["EVERYWHERE_ZERO", "real_roots_univariate", "sturm_chain", "sign_changes"]


class _EverywhereZero:
    """Marker returned for the identically-zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EVERYWHERE_ZERO"

    def __bool__(self):
        return True


EVERYWHERE_ZERO = _EverywhereZero()

TRIM = 1e-14
CHAIN_TOL = 1e-12


def _trim(c: np.ndarray, rel: float) -> np.ndarray:
    """Drop leading (highest-degree) coefficients below ``rel * max|c|``."""
    scale = np.max(np.abs(c), initial=0.0)
    k = c.shape[0]
    while k > 1 and abs(c[k - 1]) <= rel * scale:
        k -= 1
    return c[:k]


def _normalize(c: np.ndarray) -> np.ndarray:
    return c / np.max(np.abs(c))


def sturm_chain(coeffs) -> list:
    """Sturm sequence of a polynomial (ascending coefficients).

    Remainders smaller than ``CHAIN_TOL`` relative to their dividend are
    treated as zero, which ends the chain at an approximate gcd.
    """
    p0 = _normalize(np.asarray(coeffs, dtype=float))
    chain = [p0]
    if p0.shape[0] == 1:
        return chain
    chain.append(_normalize(P.polyder(p0)))
    while chain[-1].shape[0] > 1:
        _, rem = P.polydiv(chain[-2], chain[-1])
        rem = np.atleast_1d(rem)
        if np.max(np.abs(rem)) <= CHAIN_TOL * np.max(np.abs(chain[-2])):
            break
        chain.append(_normalize(-_trim(rem, CHAIN_TOL)))
    return chain


def sign_changes(chain, x: float) -> int:
    signs = [np.sign(P.polyval(x, c)) for c in chain]
    signs = [s for s in signs if s != 0]
    return int(sum(1 for a, b in zip(signs, signs[1:]) if a != b))


def _refine(p, chain, lo, hi, width_tol):
    """Shrink ``(lo, hi]`` holding one distinct root to a single value."""
    flo, fhi = P.polyval(lo, p), P.polyval(hi, p)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) != np.sign(fhi):
        return brentq(lambda t: P.polyval(t, p), lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    # even multiplicity: no sign change, bisect on the Sturm count instead
    vlo = sign_changes(chain, lo)
    for _ in range(200):
        if hi - lo <= width_tol:
            break
        mid = 0.5 * (lo + hi)
        if vlo - sign_changes(chain, mid) >= 1:
            hi = mid
        else:
            lo, vlo = mid, sign_changes(chain, mid)
    x = 0.5 * (lo + hi)
    dp = P.polyder(p)
    for _ in range(5):
        slope = P.polyval(x, dp)
        if slope == 0:
            break
        step = P.polyval(x, p) / slope
        nxt = x - step
        if not lo - width_tol <= nxt <= hi + width_tol or abs(P.polyval(nxt, p)) >= abs(P.polyval(x, p)):
            break
        x = nxt
    return x


def real_roots_univariate(coeffs, interval, tol: float = 1e-10):
    """Real roots of a polynomial inside a closed interval.

    Parameters
    ----------
    coeffs : array_like
        Coefficients in ascending order of powers; vanishing leading terms
        are deflated first.
    interval : (float, float)
        Search window ``[a, b]``.
    tol : float
        Accepted roots satisfy ``|P(root)| <= tol * max|coeffs|``.

    Returns
    -------
    numpy.ndarray or EVERYWHERE_ZERO
        Sorted distinct roots; a multiple root is reported once.
    """
    a, b = float(interval[0]), float(interval[1])
    if not a <= b:
        raise ValueError(f"empty interval [{a}, {b}]")
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0 or not np.any(c):
        return EVERYWHERE_ZERO
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    p = _normalize(_trim(c, TRIM))
    if p.shape[0] == 1:
        return np.empty(0)
    chain = sturm_chain(p)
    width_tol = 1e-14 * max(1.0, abs(a), abs(b))
    roots = []
    start = a
    if P.polyval(a, p) == 0:
        # the Sturm count over (a, b] needs p(a) != 0
        roots.append(a)
        start = min(a + width_tol, b)

    stack = [(start, b, sign_changes(chain, start), sign_changes(chain, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count <= 0:
            continue
        if count == 1:
            roots.append(_refine(p, chain, lo, hi, width_tol))
            continue
        if hi - lo <= width_tol:
            roots.append(0.5 * (lo + hi))
            continue
        mid = 0.5 * (lo + hi)
        vmid = sign_changes(chain, mid)
        stack.append((mid, hi, vmid, vhi))
        stack.append((lo, mid, vlo, vmid))

    roots = np.sort(np.array(roots, dtype=float))
    if roots.size:
        keep = np.concatenate([[True], np.diff(roots) > width_tol])
        roots = roots[keep]
        ok = np.abs(P.polyval(roots, p)) <= tol
        roots = roots[ok & (roots >= a) & (roots <= b)]
    return roots
