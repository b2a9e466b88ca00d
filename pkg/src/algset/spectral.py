"""Symmetric eigendecomposition, kernel extraction and subspace distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .moments import MomentMatrix

__all__ = [
    "SpectralDecomposition",
    "KernelEstimate",
    "ConvergenceError",
    "eig_sym",
    "jacobi_eigh",
    "extract_kernel",
    "default_cutoff",
    "subspace_distance",
    "eigengap_diagnostic",
]

OFF_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Raised when Jacobi sweeps fail to diagonalize a matrix."""


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


@dataclass(frozen=True)
class KernelEstimate:
    """Near-null eigenpairs kept by the cutoff.

    ``vectors`` has shape ``(kappa, k_hat)``; ``eigengap`` is
    ``lambda_{k+1} - lambda_k`` and is ``None`` when ``k_hat`` is 0 or kappa.
    """

    k_hat: int
    vectors: np.ndarray
    cutoff: float
    eigengap: Optional[float]
    eigenvalues_kept: np.ndarray
    eigenvalues: np.ndarray


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi eigen-solver for a real symmetric matrix.

    Returns unsorted ``(eigenvalues, eigenvectors, sweeps)``.  Sweeps stop
    once the off-diagonal Frobenius norm falls to ``tol * ||matrix||_F``.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v, 0
    target = tol * scale
    for sweep in range(1, max_sweeps + 1):
        if _off_norm(a) <= target:
            return np.diag(a).copy(), v, sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) < 1e-300 or abs(apq) <= 1e-18 * math.sqrt(abs(a[p, p] * a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    if _off_norm(a) <= target:
        return np.diag(a).copy(), v, max_sweeps
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each is positive."""
    vectors = np.array(vectors, dtype=float)
    for k in range(vectors.shape[1]):
        pivot = int(np.argmax(np.abs(vectors[:, k])))
        if vectors[pivot, k] < 0:
            vectors[:, k] = -vectors[:, k]
    return vectors


def eig_sym(matrix) -> SpectralDecomposition:
    """Ascending eigendecomposition of a symmetric matrix.

    Accepts a :class:`MomentMatrix` or a plain square array; the input is
    symmetrized first.
    """
    m = matrix.entries if isinstance(matrix, MomentMatrix) else matrix
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    m = 0.5 * (m + m.T)
    values, vectors, sweeps = jacobi_eigh(m)
    order = np.argsort(values, kind="stable")
    return SpectralDecomposition(
        eigenvalues=values[order],
        eigenvectors=canonical_signs(vectors[:, order]),
        sweeps=sweeps,
    )


def extract_kernel(dec: SpectralDecomposition, cutoff: float) -> KernelEstimate:
    """Keep the eigenpairs with eigenvalue strictly below ``cutoff``."""
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    lam = dec.eigenvalues
    k = int(np.sum(lam < cutoff))
    gap = float(lam[k] - lam[k - 1]) if 0 < k < lam.shape[0] else None
    return KernelEstimate(
        k_hat=k,
        vectors=dec.eigenvectors[:, :k].copy(),
        cutoff=float(cutoff),
        eigengap=gap,
        eigenvalues_kept=lam[:k].copy(),
        eigenvalues=lam.copy(),
    )


def default_cutoff(n: int, c: float = 1.0) -> float:
    """``c * n^(-1/4)``: vanishes, yet slower than the ``n^(-1/2)`` noise."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return float(c) * float(n) ** -0.25


def eigengap_diagnostic(eigenvalues) -> dict:
    """Position of the largest gap between consecutive eigenvalues, relative
    to the spectral scale.  Informational only; never used as a cutoff."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size < 2:
        return {"k": None, "relative_gap": None}
    scale = max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
    gaps = np.diff(lam) / scale
    k = int(np.argmax(gaps))
    return {"k": k + 1, "relative_gap": float(gaps[k])}


def _check_orthonormal(u: np.ndarray, name: str, tol: float = 1e-8) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    if u.shape[1] and np.max(np.abs(u.T @ u - np.eye(u.shape[1]))) > tol:
        raise ValueError(f"columns of {name} are not orthonormal")
    return u


def subspace_distance(u, v) -> float:
    """Chordal distance ``||U U^T - V V^T||_F`` between column spans."""
    u = _check_orthonormal(u, "U")
    v = _check_orthonormal(v, "V")
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"ambient sizes differ: {u.shape[0]} vs {v.shape[0]}")
    return float(np.linalg.norm(u @ u.T - v @ v.T))
