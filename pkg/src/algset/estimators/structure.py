"""Projection onto polynomials that factor with prescribed degrees."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..basis import basis_for_length, build_basis
from ..synth import canonical_polynomial_sign
from .polynomials import PolynomialSystem, multiplication_matrix, multiply_polynomials

__all__ = [
    "FactorStructure",
    "FactoredPolynomial",
    "DegenerateProjection",
    "project_factorized",
    "structured_system",
    "parse_structure",
]

RIDGE = 1e-12


class DegenerateProjection(RuntimeError):
    """Every restart hit a rank-deficient least-squares block."""


@dataclass(frozen=True)
class FactorStructure:
    """Degrees ``(g_1, ..., g_m)`` of the factors, ``m >= 2``."""

    degrees: tuple

    def __post_init__(self):
        degs = tuple(int(g) for g in self.degrees)
        if len(degs) < 2:
            raise ValueError("a factor structure needs at least two factors")
        if min(degs) < 1:
            raise ValueError("factor degrees must be positive")
        object.__setattr__(self, "degrees", degs)

    @property
    def total(self) -> int:
        return sum(self.degrees)


def parse_structure(text: str) -> FactorStructure:
    """``"1,1"`` -> ``FactorStructure((1, 1))``."""
    try:
        degs = tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise ValueError(f"malformed structure {text!r}") from None
    return FactorStructure(degs)


@dataclass
class FactoredPolynomial:
    """``scale * prod(factors)``; every factor has unit norm."""

    scale: float
    factors: list
    residual: float
    degrees: tuple
    d: int = 2
    restart: int = 0
    iterations: int = 0

    def product(self) -> np.ndarray:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = multiply_polynomials(out, f, self.d)
        return self.scale * out

    def to_dict(self) -> dict:
        return {
            "scale": float(self.scale),
            "degrees": list(self.degrees),
            "factors": [[float(v) for v in f] for f in self.factors],
            "residual": float(self.residual),
        }


def _product(factors, d, skip=None):
    out = None
    for j, f in enumerate(factors):
        if j == skip:
            continue
        out = f if out is None else multiply_polynomials(out, f, d)
    return out


def _block_solve(design, target):
    gram = design.T @ design
    w = np.linalg.eigvalsh(gram)
    if not w[-1] > 0 or w[0] <= 1e-14 * w[-1]:
        return None
    gram[np.diag_indices_from(gram)] += RIDGE
    return np.linalg.solve(gram, design.T @ target)


def _descend(target, degrees, d, init, max_iters, tol):
    """Cyclic block least squares from one start; ``None`` if degenerate."""
    factors = [f.copy() for f in init]
    residual = np.inf
    for it in range(1, max_iters + 1):
        for j, gj in enumerate(degrees):
            other = _product(factors, d, skip=j)
            sol = _block_solve(multiplication_matrix(other, d, gj).T, target)
            if sol is None:
                return None
            factors[j] = sol
        norms = [np.linalg.norm(f) for f in factors]
        if min(norms) == 0:
            return None
        scale = float(np.prod(norms))
        unit = [f / nrm for f, nrm in zip(factors, norms)]
        current = float(np.linalg.norm(scale * _product(unit, d) - target))
        done = residual - current < tol
        residual = current
        if done:
            break
        # spread the magnitude evenly so no block becomes ill-conditioned
        spread = scale ** (1.0 / len(unit))
        factors = [spread * f for f in unit]
    return scale, unit, residual, it


def _canonical(scale, factors, degrees, d):
    """Canonical sign per factor, then lexicographic order within a degree."""
    signed = []
    for f, g in zip(factors, degrees):
        c = canonical_polynomial_sign(f, build_basis(d, g))
        if not np.array_equal(c, f):
            scale = -scale
        signed.append((g, tuple(c)))
    signed.sort()
    return scale, [np.array(c) for _, c in signed], tuple(g for g, _ in signed)


def project_factorized(u, structure: FactorStructure, d: int = 2, restarts: int = 20,
                       max_iters: int = 500, tol: float = 1e-10, seed=0) -> FactoredPolynomial:
    """Closest ``scale * f_1 * ... * f_m`` to the coefficient vector ``u``.

    Block coordinate descent: each factor in turn is the least-squares
    solution with the others fixed.  The input is normalized first, so
    scaling ``u`` scales the result exactly.  The best of ``restarts``
    random unit starts wins, ties going to the lower restart index.

    Raises
    ------
    DegenerateProjection
        If every restart degenerates.
    """
    u = np.asarray(u, dtype=float)
    norm = float(np.linalg.norm(u))
    if not norm > 0:
        raise ValueError("cannot project the zero polynomial")
    g = basis_for_length(d, u.shape[0]).g
    if structure.total != g:
        raise ValueError(f"factor degrees sum to {structure.total}, polynomial has degree {g}")
    target = u / norm
    sizes = [len(build_basis(d, gj)) for gj in structure.degrees]
    best = None
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.Generator(np.random.Philox(child))
        init = [rng.standard_normal(k) for k in sizes]
        init = [f / np.linalg.norm(f) for f in init]
        out = _descend(target, structure.degrees, d, init, max_iters, tol)
        if out is None:
            continue
        if best is None or out[2] < best[1][2]:
            best = (r, out)
    if best is None:
        raise DegenerateProjection("all restarts produced a rank-deficient block")
    r, (scale, factors, residual, iters) = best
    scale, factors, degrees = _canonical(scale, factors, structure.degrees, d)
    return FactoredPolynomial(scale * norm, factors, residual * norm, degrees, d, r, iters)


def structured_system(kernel, structure: FactorStructure, basis, **opts) -> PolynomialSystem:
    """Project every kernel vector and return the expanded products.

    The factorizations are kept in ``system.factors``.
    """
    vectors = np.asarray(kernel.vectors)
    if vectors.ndim != 2 or vectors.shape[1] == 0:
        raise ValueError("empty kernel: nothing to project")
    projected = [project_factorized(vectors[:, k], structure, basis.d, **opts)
                 for k in range(vectors.shape[1])]
    coeffs = np.array([p.product() for p in projected])
    return PolynomialSystem(basis, coeffs, factors=projected)
