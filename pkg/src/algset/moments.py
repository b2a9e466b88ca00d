"""Vandermonde and moment matrices, plus Gaussian debiasing.

Every entry of a moment matrix of degree ``g`` is the sample mean of one
monomial of degree at most ``2g``; the entry at ``(rank(i), rank(j))``
depends only on ``i + j``.  Both the empirical and the debiased matrices are
assembled from that list of distinct exponent sums, so symmetry is exact and
each mean is computed once.

Debiasing replaces every observed monomial by a Gaussian-unbiased
polynomial in the observations (a product of Hermite-type corrections for
diagonal noise, a signed sum over index pairings for a full covariance).
"""

from __future__ import annotations

import collections
import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import MonomialBasis, _check_points, monomials, power_table

__all__ = [
    "NoiseModel",
    "Dataset",
    "MomentMatrix",
    "vandermonde",
    "empirical_moment_matrix",
    "debiased_moment_matrix",
    "unbiased_monomial_estimator",
    "general_monomial_estimator",
    "analytic_bias_matrix",
    "hermite_coefficient",
    "exponent_sums",
]

PSD_TOL = 1e-10


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian noise covariance, in variance units.

    ``kind`` is ``"isotropic"`` (``value`` is a scalar variance),
    ``"diagonal"`` (a vector of per-coordinate variances) or ``"full"``
    (a symmetric PSD matrix).
    """

    kind: str
    value: object

    def __post_init__(self):
        if self.kind == "isotropic":
            v = float(self.value)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"variance must be finite and >= 0, got {v}")
            object.__setattr__(self, "value", v)
        elif self.kind == "diagonal":
            v = np.array(self.value, dtype=float).reshape(-1)
            if v.size == 0 or not np.all(np.isfinite(v)) or np.any(v < 0):
                raise ValueError("diagonal variances must be finite and >= 0")
            v.setflags(write=False)
            object.__setattr__(self, "value", v)
        elif self.kind == "full":
            v = np.array(self.value, dtype=float)
            if v.ndim != 2 or v.shape[0] != v.shape[1]:
                raise ValueError(f"covariance must be square, got shape {v.shape}")
            if not np.all(np.isfinite(v)):
                raise ValueError("covariance has non-finite entries")
            if not np.allclose(v, v.T, rtol=0, atol=1e-12 * max(1.0, np.abs(v).max())):
                raise ValueError("covariance must be symmetric")
            if np.linalg.eigvalsh(v).min() < -PSD_TOL:
                raise ValueError("covariance must be positive semidefinite")
            v.setflags(write=False)
            object.__setattr__(self, "value", v)
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def isotropic(cls, variance: float) -> "NoiseModel":
        return cls("isotropic", variance)

    @classmethod
    def from_sigma(cls, sigma: float) -> "NoiseModel":
        """Isotropic noise with standard deviation ``sigma``."""
        return cls("isotropic", float(sigma) ** 2)

    @classmethod
    def diagonal(cls, variances) -> "NoiseModel":
        return cls("diagonal", variances)

    @classmethod
    def full(cls, covariance) -> "NoiseModel":
        return cls("full", covariance)

    def covariance(self, d: int) -> np.ndarray:
        if self.kind == "isotropic":
            return self.value * np.eye(d)
        if self.kind == "diagonal":
            self._check_dim(len(self.value), d)
            return np.diag(self.value)
        self._check_dim(self.value.shape[0], d)
        return np.array(self.value)

    def variances(self, d: int) -> np.ndarray:
        if self.kind == "isotropic":
            return np.full(d, self.value)
        if self.kind == "diagonal":
            self._check_dim(len(self.value), d)
            return np.array(self.value)
        return np.diag(self.covariance(d)).copy()

    @property
    def is_diagonal(self) -> bool:
        if self.kind != "full":
            return True
        off = self.value - np.diag(np.diag(self.value))
        return not np.any(off)

    def is_zero(self) -> bool:
        return not np.any(np.asarray(self.value))

    @staticmethod
    def _check_dim(have, want):
        if have != want:
            raise ValueError(f"noise model has dimension {have}, data has {want}")

    def to_dict(self) -> dict:
        if self.kind == "isotropic":
            return {"kind": "isotropic", "variance": self.value}
        if self.kind == "diagonal":
            return {"kind": "diagonal", "variances": [float(v) for v in self.value]}
        return {"kind": "full", "covariance": [[float(v) for v in row] for row in self.value]}

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        kind = data["kind"]
        key = {"isotropic": "variance", "diagonal": "variances", "full": "covariance"}[kind]
        return cls(kind, data[key])


@dataclass
class Dataset:
    """Observed points, with the latent points and noise when known."""

    observed: np.ndarray
    latent: Optional[np.ndarray] = None
    noise: Optional[NoiseModel] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.observed = np.asarray(self.observed, dtype=float)
        if self.observed.ndim != 2 or self.observed.shape[0] < 1:
            raise ValueError("observed must be an (n, d) array with n >= 1")
        if self.latent is not None:
            self.latent = np.asarray(self.latent, dtype=float)
            if self.latent.shape != self.observed.shape:
                raise ValueError(
                    f"latent shape {self.latent.shape} != observed {self.observed.shape}"
                )

    @property
    def n(self) -> int:
        return self.observed.shape[0]

    @property
    def d(self) -> int:
        return self.observed.shape[1]


@dataclass(frozen=True)
class MomentMatrix:
    basis: MonomialBasis
    entries: np.ndarray = field(repr=False)
    provenance: str = "empirical"

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


def vandermonde(basis: MonomialBasis, points) -> np.ndarray:
    """Rows are Veronese images of ``points``; shape ``(n, kappa)``."""
    points = _check_points(basis, points)
    return monomials(points, basis.exponents)


@functools.lru_cache(maxsize=None)
def _exponent_sums(d: int, g: int, elements: tuple):
    """Distinct ``i + j`` over pairs of the basis, and the index map."""
    exps = [e[1:] for e in elements]
    k = len(exps)
    lookup = {}
    sums = []
    index = np.empty((k, k), dtype=np.int64)
    for r in range(k):
        for c in range(r, k):
            s = tuple(a + b for a, b in zip(exps[r], exps[c]))
            if s not in lookup:
                lookup[s] = len(sums)
                sums.append(s)
            index[r, c] = index[c, r] = lookup[s]
    index.setflags(write=False)
    return tuple(sums), index


def exponent_sums(basis: MonomialBasis):
    """Return ``(sums, index)``: the distinct exponent sums and the ``kappa x
    kappa`` array mapping each matrix entry to its sum."""
    return _exponent_sums(basis.d, basis.g, basis.elements)


def _pairwise_mean(values: np.ndarray) -> float:
    # numpy reduces contiguous 1-D float arrays with a fixed pairwise tree
    values = np.ascontiguousarray(values, dtype=float)
    return float(np.add.reduce(values)) / values.shape[0]


def _column_product(tables, exponent) -> np.ndarray:
    """Product over coordinates of ``tables[j][exponent[j]]``.

    ``tables[j][k]`` is a length-n array; exponent 0 factors are skipped so
    the multiplication order is identical for raw and adjusted tables.
    """
    n = tables[0][0].shape[0]
    out = np.ones(n)
    for j, k in enumerate(exponent):
        if k:
            out = out * tables[j][k]
    return out


def _assemble(basis: MonomialBasis, means, provenance: str) -> MomentMatrix:
    _, index = exponent_sums(basis)
    entries = np.asarray(means, dtype=float)[index]
    return MomentMatrix(basis=basis, entries=entries, provenance=provenance)


def empirical_moment_matrix(basis: MonomialBasis, points) -> MomentMatrix:
    """``V^T V / n`` for the Vandermonde matrix ``V`` of ``points``."""
    points = _check_points(basis, points)
    sums, _ = exponent_sums(basis)
    table = power_table(points, 2 * basis.g)
    means = [_pairwise_mean(_column_product(table, s)) for s in sums]
    return _assemble(basis, means, "empirical")


@functools.lru_cache(maxsize=None)
def hermite_coefficient(K: int, j: int) -> int:
    """``C(K, 2j) (2j)! / (j! 2^j)``: the number of ways to pick ``j`` disjoint
    pairs out of ``K`` slots."""
    return math.comb(K, 2 * j) * math.factorial(2 * j) // (math.factorial(j) * 2**j)


def _adjusted_powers(table_row: np.ndarray, variance: float, top: int):
    """``h_K(x; s)`` for ``K = 0..top`` given raw powers of one coordinate."""
    if variance == 0.0:
        return [table_row[k] for k in range(top + 1)]
    out = []
    for K in range(top + 1):
        h = table_row[K].copy()
        for j in range(1, K // 2 + 1):
            h += hermite_coefficient(K, j) * (-variance) ** j * table_row[K - 2 * j]
        out.append(h)
    return out


def _as_points(x, d=None):
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim <= 1
    arr = np.atleast_1d(arr)
    if arr.ndim == 1:
        arr = arr[None, :]
    if d is not None and arr.shape[1] != d:
        raise ValueError(f"point dimension {arr.shape[1]} does not match {d}")
    return arr, scalar


def unbiased_monomial_estimator(x, a, noise: NoiseModel):
    """Gaussian-unbiased estimate of the latent monomial ``theta^a``.

    For ``x ~ N(theta, diag(s))`` the returned value has expectation
    ``prod_j theta_j^{a_j}``.  ``x`` is one point or an ``(n, d)`` array; a
    scalar or a length-n array comes back accordingly.
    """
    a = tuple(int(v) for v in np.atleast_1d(a))
    if any(v < 0 for v in a):
        raise ValueError("exponents must be nonnegative")
    if not noise.is_diagonal:
        raise ValueError("correlated noise needs general_monomial_estimator")
    pts, scalar = _as_points(x, len(a))
    variances = noise.variances(len(a))
    top = max(a, default=0)
    table = power_table(pts, top)
    adjusted = [_adjusted_powers(table[j], variances[j], top) for j in range(len(a))]
    out = _column_product(adjusted, a)
    return float(out[0]) if scalar else out


@functools.lru_cache(maxsize=None)
def _pairing_terms(a: tuple):
    """Collapse all partial pairings of the slots of ``a``.

    Returns tuples ``(k, count, pairs, singles)``: ``count`` pairings use the
    ``k`` variable pairs ``pairs`` and leave the exponent vector ``singles``.
    Homogenizing slots carry no variance, so pairings touching them vanish
    and are never enumerated.
    """
    slots = tuple(j for j, e in enumerate(a) for _ in range(e))
    d = len(a)
    counter = collections.Counter()

    def walk(rest, pairs, singles):
        if not rest:
            key = (tuple(sorted(pairs)), tuple(singles))
            counter[key] += 1
            return
        head, tail = rest[0], rest[1:]
        singles[slots[head]] += 1
        walk(tail, pairs, singles)
        singles[slots[head]] -= 1
        for p in range(len(tail)):
            u, v = sorted((slots[head], slots[tail[p]]))
            walk(tail[:p] + tail[p + 1 :], pairs + [(u, v)], singles)

    walk(tuple(range(len(slots))), [], [0] * d)
    return tuple(
        (len(pairs), count, pairs, singles)
        for (pairs, singles), count in sorted(counter.items())
    )


def general_monomial_estimator(x, a, noise: NoiseModel, g: Optional[int] = None):
    """Unbiased estimate of ``theta^a`` under ``N(theta, Sigma)`` noise.

    Sums ``(-1)^k prod Sigma[u, v] prod x^singles`` over every way of pairing
    up ``k`` of the ``|a|`` factor slots, which is the coefficient of the
    monomial in ``sum_k C_{m,k} (-1)^k sym(x~^{(m-2k)} (x) Sigma~^{(k)})``.

    When ``g`` is given, ``|a|`` must not exceed ``2g``.
    """
    a = tuple(int(v) for v in np.atleast_1d(a))
    if any(v < 0 for v in a):
        raise ValueError("exponents must be nonnegative")
    if g is not None and sum(a) > 2 * g:
        raise ValueError(f"|a| = {sum(a)} exceeds 2g = {2 * g}")
    d = len(a)
    pts, scalar = _as_points(x, d)
    cov = noise.covariance(d)
    table = power_table(pts, max(a, default=0))
    out = np.zeros(pts.shape[0])
    for k, count, pairs, singles in _pairing_terms(a):
        weight = float(count) * (-1.0) ** k
        for u, v in pairs:
            weight *= cov[u, v]
        if weight == 0.0:
            continue
        out += weight * _column_product(table, singles)
    return float(out[0]) if scalar else out


def debiased_moment_matrix(basis: MonomialBasis, points, noise: NoiseModel) -> MomentMatrix:
    """Unbiased estimate of the latent moment matrix from noisy points."""
    points = _check_points(basis, points)
    sums, _ = exponent_sums(basis)
    top = 2 * basis.g
    d = basis.d
    if noise.is_diagonal:
        variances = noise.variances(d)
        table = power_table(points, top)
        adjusted = [_adjusted_powers(table[j], variances[j], top) for j in range(d)]
        means = [_pairwise_mean(_column_product(adjusted, s)) for s in sums]
    else:
        means = [
            _pairwise_mean(general_monomial_estimator(points, s, noise, g=basis.g))
            for s in sums
        ]
    return _assemble(basis, means, "debiased")


def analytic_bias_matrix(basis: MonomialBasis, latent_points, noise: NoiseModel) -> MomentMatrix:
    """Closed-form ``E[M(mu_n)] - M(nu_n)`` for ``d = g = 2`` isotropic noise."""
    if basis.d != 2 or basis.g != 2:
        raise ValueError("analytic bias is only available for d = 2, g = 2")
    if noise.kind != "isotropic":
        raise ValueError("analytic bias needs isotropic noise")
    theta = _check_points(basis, latent_points)
    s2 = noise.value
    t1, t2 = theta.mean(axis=0)
    m11 = np.mean(theta[:, 0] ** 2)
    m22 = np.mean(theta[:, 1] ** 2)
    m12 = np.mean(theta[:, 0] * theta[:, 1])
    # order: 1, x1, x2, x1 x2, x1^2, x2^2
    upper = np.array(
        [
            [0, 0, 0, 0, 1, 1],
            [0, 1, 0, t2, 3 * t1, t1],
            [0, 0, 1, t1, t2, 3 * t2],
            [0, 0, 0, s2 + m11 + m22, 3 * m12, 3 * m12],
            [0, 0, 0, 0, 6 * m11 + 3 * s2, s2 + m11 + m22],
            [0, 0, 0, 0, 0, 6 * m22 + 3 * s2],
        ],
        dtype=float,
    )
    full = np.triu(upper) + np.triu(upper, 1).T
    return MomentMatrix(basis=basis, entries=s2 * full, provenance="analytic-bias")
