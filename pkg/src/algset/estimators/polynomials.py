"""Polynomials stored as coefficient vectors over a canonical basis."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from ..basis import MonomialBasis, basis_for_length, build_basis, monomials

__all__ = [
    "PolynomialSystem",
    "evaluate_system",
    "multiply_polynomials",
    "multiplication_matrix",
    "product_index",
    "restrict_to_line",
]


@dataclass
class PolynomialSystem:
    """A list of polynomials sharing one basis.

    ``coeffs`` has shape ``(k, kappa)``: one row per polynomial.
    ``factors`` optionally holds a factorization per row (see
    :func:`algset.estimators.structure.project_factorized`).
    """

    basis: MonomialBasis
    coeffs: np.ndarray
    factors: list = field(default_factory=list)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim == 1:
            c = c[None, :]
        if c.shape[1:] != (len(self.basis),) and c.size:
            raise ValueError(f"coefficient rows must have length {len(self.basis)}")
        if c.size == 0:
            c = c.reshape(0, len(self.basis))
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        self.coeffs = c

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def from_kernel(cls, basis: MonomialBasis, kernel) -> "PolynomialSystem":
        return cls(basis, np.asarray(kernel.vectors).T)

    def __call__(self, points) -> np.ndarray:
        return evaluate_many(self, points)


def evaluate_many(system: PolynomialSystem, points) -> np.ndarray:
    """Values at ``(n, d)`` points, shape ``(n, k)``."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[None, :]
    if points.shape[1] != system.basis.d:
        raise ValueError(f"points must have {system.basis.d} coordinates")
    return monomials(points, system.basis.exponents) @ system.coeffs.T


def evaluate_system(system: PolynomialSystem, x) -> np.ndarray:
    """Value of every polynomial of ``system`` at the point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (system.basis.d,):
        raise ValueError(f"expected a point in R^{system.basis.d}")
    return evaluate_many(system, x[None, :])[0]


@functools.lru_cache(maxsize=None)
def product_index(d: int, g1: int, g2: int) -> np.ndarray:
    """``idx[i, j]``: position of ``e_i + e_j`` in the degree ``g1 + g2`` basis."""
    b1, b2, b = build_basis(d, g1), build_basis(d, g2), build_basis(d, g1 + g2)
    e1, e2 = b1.exponents, b2.exponents
    idx = np.empty((len(b1), len(b2)), dtype=np.int64)
    for i in range(len(b1)):
        for j in range(len(b2)):
            idx[i, j] = b.rank(tuple(e1[i] + e2[j]))
    idx.setflags(write=False)
    return idx


def multiply_polynomials(p, q, d: int) -> np.ndarray:
    """Coefficients of ``p * q``; degrees are inferred from vector lengths."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    g1 = basis_for_length(d, p.shape[0]).g
    g2 = basis_for_length(d, q.shape[0]).g
    idx = product_index(d, g1, g2)
    out = np.zeros(len(build_basis(d, g1 + g2)))
    np.add.at(out, idx.ravel(), np.outer(p, q).ravel())
    return out


def multiplication_matrix(a, d: int, g_other: int) -> np.ndarray:
    """Matrix ``M(a)`` with ``M(a).T @ b == multiply_polynomials(a, b, d)``
    for every ``b`` of degree ``g_other``."""
    a = np.asarray(a, dtype=float)
    g_a = basis_for_length(d, a.shape[0]).g
    idx = product_index(d, g_a, g_other)
    m = np.zeros((idx.shape[1], len(build_basis(d, g_a + g_other))))
    rows = np.broadcast_to(np.arange(idx.shape[1]), idx.shape)
    np.add.at(m, (rows, idx), np.broadcast_to(a[:, None], idx.shape))
    return m


def restrict_to_line(coeffs, basis: MonomialBasis, axis: int, value: float) -> np.ndarray:
    """Univariate coefficients (ascending powers) of ``P`` with coordinate
    ``axis`` fixed to ``value``; only ``d = 2``."""
    if basis.d != 2:
        raise ValueError("line restriction is implemented for d = 2")
    exps = basis.exponents
    fixed = exps[:, axis]
    free = exps[:, 1 - axis]
    out = np.zeros(basis.g + 1)
    np.add.at(out, free, np.asarray(coeffs, dtype=float) * float(value) ** fixed)
    return out
