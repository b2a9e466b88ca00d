"""Graded monomial bases and the Veronese embedding.

A basis of degree ``g`` in ``d`` variables holds every multi-index
``(i_0, i_1, ..., i_d)`` with ``sum == g``.  The leading slot ``i_0`` is the
homogenizing exponent, so monomials of degree below ``g`` live in the same
basis.  The ordering is fixed once here and used everywhere else.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MonomialBasis",
    "build_basis",
    "veronese",
    "order_key",
    "multinomial_weights",
    "basis_for_length",
]


def order_key(exponents):
    """Sort key of the canonical monomial order.

    ``exponents`` are the variable exponents ``(i_1, ..., i_d)`` (no
    homogenizing slot).  Monomials are ordered by total degree, then by the
    largest single exponent, then by descending lexicographic order.
    """
    exponents = tuple(int(e) for e in exponents)
    return (sum(exponents), max(exponents, default=0), tuple(-e for e in exponents))


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered set of multi-indices of degree ``g`` in ``d`` variables.

    Attributes
    ----------
    d : int
        Ambient dimension.
    g : int
        Degree.
    elements : tuple of tuple of int
        Full multi-indices ``(i_0, ..., i_d)`` in canonical order.
    """

    d: int
    g: int
    elements: tuple
    _rank: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def exponents(self) -> np.ndarray:
        """``(kappa, d)`` integer array of variable exponents."""
        return np.array([e[1:] for e in self.elements], dtype=np.int64).reshape(
            len(self.elements), self.d
        )

    @property
    def degrees(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    def rank(self, index) -> int:
        """Position of a multi-index.

        Accepts either the full ``(i_0, ..., i_d)`` or the variable part
        ``(i_1, ..., i_d)``.
        """
        index = tuple(int(i) for i in index)
        if len(index) == self.d:
            index = (self.g - sum(index),) + index
        try:
            return self._rank[index]
        except KeyError:
            raise KeyError(f"{index} is not in B(d={self.d}, g={self.g})") from None

    def unrank(self, position: int) -> tuple:
        return self.elements[position]

    def to_list(self) -> list:
        """Variable exponents as nested lists (JSON friendly)."""
        return [list(e[1:]) for e in self.elements]


def build_basis(d: int, g: int) -> MonomialBasis:
    """Enumerate ``B_{d,g}`` in canonical order.

    Parameters
    ----------
    d : int
        Ambient dimension, ``d >= 1``.
    g : int
        Degree, ``g >= 1``.
    """
    if int(d) != d or int(g) != g or d < 1 or g < 1:
        raise ValueError(f"need integers d >= 1 and g >= 1, got d={d}, g={g}")
    d, g = int(d), int(g)
    monomials = [
        e for e in itertools.product(range(g + 1), repeat=d) if sum(e) <= g
    ]
    monomials.sort(key=order_key)
    elements = tuple((g - sum(e),) + tuple(e) for e in monomials)
    rank = {e: k for k, e in enumerate(elements)}
    basis = MonomialBasis(d=d, g=g, elements=elements, _rank=rank)
    assert len(elements) == math.comb(d + g, d)
    return basis


def basis_for_length(d: int, length: int) -> MonomialBasis:
    """Return the basis in ``d`` variables whose size is ``length``."""
    g = 0
    while math.comb(d + g, d) < length:
        g += 1
    if g == 0 or math.comb(d + g, d) != length:
        raise ValueError(f"no degree g >= 1 with C(d+g, d) = {length} for d={d}")
    return build_basis(d, g)


def multinomial_weights(basis: MonomialBasis) -> np.ndarray:
    """``g! / (i_0! i_1! ... i_d!)`` for each element."""
    g = basis.g
    out = np.empty(len(basis))
    for k, e in enumerate(basis.elements):
        w = math.factorial(g)
        for i in e:
            w //= math.factorial(i)
        out[k] = w
    return out


def _check_points(basis: MonomialBasis, points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[None, :]
    if points.ndim != 2 or points.shape[1] != basis.d:
        raise ValueError(
            f"expected points with {basis.d} coordinates, got shape {points.shape}"
        )
    return points


def power_table(points: np.ndarray, top: int) -> np.ndarray:
    """``table[j, k, s] = points[s, j] ** k`` for ``k <= top``.

    Powers are built by repeated multiplication so every caller sees the same
    rounding.
    """
    n, d = points.shape
    table = np.empty((d, top + 1, n))
    table[:, 0, :] = 1.0
    for k in range(1, top + 1):
        table[:, k, :] = table[:, k - 1, :] * points.T
    return table


def monomials(points, exponents) -> np.ndarray:
    """Evaluate monomials with the given ``(m, d)`` exponents at ``(n, d)`` points.

    Returns an ``(n, m)`` array.
    """
    points = np.asarray(points, dtype=float)
    exponents = np.asarray(exponents, dtype=np.int64)
    top = int(exponents.max(initial=0))
    table = power_table(points, top)
    out = np.ones((points.shape[0], exponents.shape[0]))
    for col, e in enumerate(exponents):
        for j, k in enumerate(e):
            if k:
                out[:, col] *= table[j, k]
    return out


def veronese(basis: MonomialBasis, x) -> np.ndarray:
    """Veronese image of a single point, ordered by ``basis``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.d,):
        raise ValueError(f"expected a point in R^{basis.d}, got shape {x.shape}")
    return monomials(x[None, :], basis.exponents)[0]
