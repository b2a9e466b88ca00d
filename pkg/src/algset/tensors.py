"""Dense symmetric-tensor representation of Veronese moments.

Only used for small ``(d, g)``: it materializes ``(d+1)^m`` arrays.  The
moment code never goes through here; the functions exist so the
entry-wise estimators can be checked against the tensor formulation.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .basis import MonomialBasis
from .moments import NoiseModel, hermite_coefficient

__all__ = [
    "lift",
    "tensor_power",
    "sym",
    "gamma",
    "moment_from_tensor",
    "lifted_covariance",
    "debiased_tensor",
]


def lift(x) -> np.ndarray:
    """``(1, x_1, ..., x_d)``."""
    return np.concatenate([[1.0], np.asarray(x, dtype=float)])


def tensor_power(v, m: int) -> np.ndarray:
    out = np.array(1.0)
    for _ in range(m):
        out = np.multiply.outer(out, v)
    return out


def sym(t: np.ndarray) -> np.ndarray:
    """Average of ``t`` over all permutations of its axes."""
    m = t.ndim
    if m <= 1:
        return np.array(t, dtype=float)
    acc = np.zeros_like(t, dtype=float)
    for perm in itertools.permutations(range(m)):
        acc += np.transpose(t, perm)
    return acc / math.factorial(m)


def _index_tuple(multi_index) -> tuple:
    return tuple(slot for slot, e in enumerate(multi_index) for _ in range(e))


def gamma(t: np.ndarray, basis: MonomialBasis) -> np.ndarray:
    """Read the upper-triangular entries of a symmetric order-``g`` tensor
    into a vector ordered by ``basis``."""
    if t.ndim != basis.g:
        raise ValueError(f"tensor order {t.ndim} != basis degree {basis.g}")
    return np.array([t[_index_tuple(e)] for e in basis.elements])


def moment_from_tensor(t: np.ndarray, basis: MonomialBasis) -> np.ndarray:
    """Reshape a symmetric order-``2g`` tensor into a ``kappa x kappa`` matrix
    (the map ``h (gamma (x) gamma)``)."""
    if t.ndim != 2 * basis.g:
        raise ValueError(f"tensor order {t.ndim} != 2g = {2 * basis.g}")
    idx = [_index_tuple(e) for e in basis.elements]
    k = len(idx)
    out = np.empty((k, k))
    for r in range(k):
        for c in range(k):
            out[r, c] = t[idx[r] + idx[c]]
    return out


def lifted_covariance(noise: NoiseModel, d: int) -> np.ndarray:
    """Covariance of ``(1, x)``: the homogenizing coordinate has no noise."""
    out = np.zeros((d + 1, d + 1))
    out[1:, 1:] = noise.covariance(d)
    return out


def debiased_tensor(x, noise: NoiseModel, m: int) -> np.ndarray:
    """``sum_k C_{m,k} (-1)^k sym(x~^{(m-2k)} (x) Sigma~^{(k)})`` for one point."""
    x = np.asarray(x, dtype=float)
    xt = lift(x)
    cov = lifted_covariance(noise, x.shape[0])
    acc = np.zeros((x.shape[0] + 1,) * m)
    for k in range(m // 2 + 1):
        t = tensor_power(xt, m - 2 * k)
        for _ in range(k):
            t = np.multiply.outer(t, cov)
        acc += hermite_coefficient(m, k) * (-1) ** k * sym(t)
    return acc
