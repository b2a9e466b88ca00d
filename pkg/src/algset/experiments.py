"""Monte Carlo studies over sample size: subspace rate, eigenvalue
dichotomy and tube Hausdorff rate."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import stats

from .basis import build_basis
from .estimators.polynomials import PolynomialSystem
from .estimators.tube import default_lambda, tube_grid_points
from .metrics import hausdorff
from .moments import NoiseModel, debiased_moment_matrix, empirical_moment_matrix
from .spectral import default_cutoff, eig_sym, extract_kernel, subspace_distance
from .synth import WINDOW, add_noise, reference_coeffs, reference_sample, sample_latent, shape_from_name

__all__ = ["STUDIES", "run_study", "rep_seed", "simulate", "loglog_slope", "worker_count"]

STUDIES = ("rate", "dichotomy", "tube-rate")
TUBE_GRID = 300
REFERENCE_POINTS = 2000


def rep_seed(seed: int, rep: int) -> list:
    """Entropy for one replicate.  A pair rather than ``seed ^ rep``: XOR
    maps ``{0..R-1}`` onto itself for small seeds, so different seeds would
    share replicates."""
    return [int(seed), int(rep)]


def simulate(shape, n: int, noise: NoiseModel, seed):
    """``(latent, observed)`` for one replicate; streams keyed by ``n``."""
    key = list(seed) if isinstance(seed, (list, tuple)) else [int(seed)]
    latent = sample_latent(shape, n, key + [n, 0])
    return latent, add_noise(latent, noise, key + [n, 1])


def worker_count() -> int:
    cap = os.environ.get("ALGSET_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _one(task):
    study, shape_name, sigma, g, n, rep, seed, c = task
    shape = shape_from_name(shape_name)
    noise = NoiseModel.from_sigma(sigma)
    s = rep_seed(seed, rep)
    _, x = simulate(shape, n, noise, s)
    basis = build_basis(2, g)
    dec = eig_sym(debiased_moment_matrix(basis, x, noise))
    kern = extract_kernel(dec, default_cutoff(n, c))
    lam = dec.eigenvalues
    row = {"n": n, "rep": rep, "seed": s, "k_hat": kern.k_hat,
           "lambda1": float(lam[0]), "lambda2": float(lam[1])}
    if study in ("rate", "dichotomy"):
        u_star = reference_coeffs(shape, basis)
        row["distance"] = subspace_distance(kern.vectors, u_star)
    if study == "dichotomy":
        row["naive_lambda1"] = float(eig_sym(empirical_moment_matrix(basis, x)).eigenvalues[0])
    if study == "tube-rate":
        lam_n = default_lambda(n)
        window = ((-WINDOW, WINDOW), (-WINDOW, WINDOW))
        system = PolynomialSystem(basis, kern.vectors.T)
        if kern.k_hat == 0:
            region = tube_grid_points(PolynomialSystem(basis, np.zeros(len(basis))), 1.0, window, TUBE_GRID)
        else:
            region = tube_grid_points(system, lam_n, window, TUBE_GRID)
        row["lambda_n"] = lam_n
        row["hausdorff"] = (hausdorff(region, reference_sample(shape, REFERENCE_POINTS))
                            if len(region) else None)
    return row


def loglog_slope(ns, values) -> dict:
    """OLS fit of ``log(values)`` on ``log(ns)``."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if x.size < 2:
        return {"value": None, "stderr": None, "intercept": None}
    fit = stats.linregress(x, y)
    se = float(fit.stderr) if x.size > 2 else None
    return {"value": float(fit.slope), "stderr": se, "intercept": float(fit.intercept)}


def _summary(study, rows, ns):
    out = []
    for n in ns:
        rs = [r for r in rows if r["n"] == n]
        lam1 = np.array([r["lambda1"] for r in rs])
        s = {
            "n": n,
            "median_lambda1": float(np.median(lam1)),
            "median_abs_lambda1": float(np.median(np.abs(lam1))),
            "median_lambda2": float(np.median([r["lambda2"] for r in rs])),
            "k_hat_counts": {str(k): int(sum(r["k_hat"] == k for r in rs))
                             for k in sorted({r["k_hat"] for r in rs})},
        }
        if "distance" in rs[0]:
            s["mean_distance"] = float(np.mean([r["distance"] for r in rs]))
        if "naive_lambda1" in rs[0]:
            s["median_naive_lambda1"] = float(np.median([r["naive_lambda1"] for r in rs]))
        if "hausdorff" in rs[0]:
            h = [r["hausdorff"] for r in rs if r["hausdorff"] is not None]
            s["median_hausdorff"] = float(np.median(h)) if h else None
            s["lambda_n"] = rs[0]["lambda_n"]
        out.append(s)
    key = {"rate": "mean_distance", "dichotomy": "median_abs_lambda1",
           "tube-rate": "median_hausdorff"}[study]
    usable = [(s["n"], s[key]) for s in out if s.get(key) is not None and s[key] > 0]
    slope = loglog_slope([u[0] for u in usable], [u[1] for u in usable])
    slope["of"] = key
    return out, slope


def run_study(study: str, shape: str, sigma: float, ns, reps: int, seed: int = 0,
              g=None, cutoff_const: float = 1.0, workers=None) -> dict:
    """Run ``reps`` replicates at each ``n``; results do not depend on the
    worker schedule because every replicate has its own seed."""
    if study not in STUDIES:
        raise ValueError(f"unknown study {study!r}; choose from {STUDIES}")
    if reps < 1 or not ns:
        raise ValueError("need reps >= 1 and at least one n")
    spec = shape_from_name(shape)
    g = spec.g_star if g is None else int(g)
    ns = [int(n) for n in ns]
    tasks = [(study, shape, float(sigma), g, n, rep, int(seed), float(cutoff_const))
             for n in ns for rep in range(reps)]
    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_one, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_one(t) for t in tasks]
    summary, slope = _summary(study, rows, ns)
    return {
        "study": study,
        "shape": shape,
        "sigma": float(sigma),
        "g": g,
        "ns": ns,
        "reps": reps,
        "seed": int(seed),
        "cutoff_const": float(cutoff_const),
        "rows": rows,
        "summary": summary,
        "slope": slope,
    }
