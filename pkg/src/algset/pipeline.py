"""Moment matrix -> spectrum -> kernel, and the fitted-model record."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import MonomialBasis, build_basis
from .moments import NoiseModel, debiased_moment_matrix, empirical_moment_matrix
from .spectral import (
    KernelEstimate,
    SpectralDecomposition,
    default_cutoff,
    eig_sym,
    eigengap_diagnostic,
    extract_kernel,
)

__all__ = ["FittedModel", "fit", "model_to_dict", "model_from_dict"]


@dataclass
class FittedModel:
    basis: MonomialBasis
    n: int
    noise: Optional[NoiseModel]
    naive: bool
    decomposition: SpectralDecomposition
    kernel: KernelEstimate
    structure: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    @property
    def vectors(self) -> np.ndarray:
        return self.kernel.vectors


def fit(points, g: int, noise: Optional[NoiseModel] = None, cutoff: Optional[float] = None,
        cutoff_const: float = 1.0, naive: bool = False) -> FittedModel:
    """Estimate the degree-``g`` vanishing polynomials of noisy points.

    With ``naive=True`` the plain empirical moment matrix is used and
    ``noise`` is ignored; otherwise ``noise`` is required.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1:
        raise ValueError("points must be a nonempty (n, d) array")
    n, d = points.shape
    basis = build_basis(d, g)
    if naive:
        moment = empirical_moment_matrix(basis, points)
    else:
        if noise is None:
            raise ValueError("a noise model is required unless naive=True")
        moment = debiased_moment_matrix(basis, points, noise)
    dec = eig_sym(moment)
    r = default_cutoff(n, cutoff_const) if cutoff is None else float(cutoff)
    return FittedModel(basis, n, None if naive else noise, naive, dec, extract_kernel(dec, r))


def model_to_dict(model: FittedModel) -> dict:
    k = model.kernel
    out = {
        "d": model.basis.d,
        "g": model.basis.g,
        "basis": model.basis.to_list(),
        "n": model.n,
        "naive": model.naive,
        "noise": None if model.noise is None else model.noise.to_dict(),
        "cutoff": k.cutoff,
        "k_hat": k.k_hat,
        "eigenvalues": [float(v) for v in k.eigenvalues],
        "eigengap": k.eigengap,
        "eigengap_diagnostic": eigengap_diagnostic(k.eigenvalues),
        "kernel": [[float(v) for v in col] for col in k.vectors.T],
        "sweeps": model.decomposition.sweeps,
    }
    if model.structure is not None:
        out["structure"] = model.structure
    out.update(model.extra)
    return out


def model_from_dict(data: dict) -> FittedModel:
    """Rebuild a model; the stored basis order must match the canonical one."""
    basis = build_basis(int(data["d"]), int(data["g"]))
    if [list(e) for e in data["basis"]] != basis.to_list():
        raise ValueError("stored basis order differs from the canonical order")
    lam = np.asarray(data["eigenvalues"], dtype=float)
    vectors = np.asarray(data["kernel"], dtype=float).reshape(-1, len(basis)).T
    k = int(data["k_hat"])
    if vectors.shape[1] != k:
        raise ValueError("k_hat does not match the stored kernel")
    kernel = KernelEstimate(
        k_hat=k,
        vectors=vectors,
        cutoff=float(data["cutoff"]),
        eigengap=data.get("eigengap"),
        eigenvalues_kept=lam[:k].copy(),
        eigenvalues=lam,
    )
    # only the kernel block of the eigenvectors is stored
    dec = SpectralDecomposition(lam, vectors, int(data.get("sweeps", 0)))
    noise = None if data.get("noise") is None else NoiseModel.from_dict(data["noise"])
    known = {"d", "g", "basis", "n", "naive", "noise", "cutoff", "k_hat", "eigenvalues",
             "eigengap", "eigengap_diagnostic", "kernel", "sweeps", "structure"}
    extra = {key: v for key, v in data.items() if key not in known}
    return FittedModel(basis, int(data["n"]), noise, bool(data["naive"]), dec, kernel,
                       data.get("structure"), extra)
