"""Ground-truth shapes, latent sampling and Gaussian corruption."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import MonomialBasis, build_basis
from .moments import Dataset, NoiseModel

__all__ = [
    "ShapeSpec",
    "circle",
    "cross",
    "three_lines",
    "concentric_circles",
    "affine_line",
    "custom",
    "shape_from_name",
    "SHAPES",
    "make_rng",
    "sample_latent",
    "add_noise",
    "reference_coeffs",
    "canonical_polynomial_sign",
    "WINDOW",
    "make_dataset",
    "reference_sample",
]

WINDOW = 3.0


def make_rng(seed) -> np.random.Generator:
    """Counter-based Philox generator seeded through ``SeedSequence``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class ShapeSpec:
    """A built-in algebraic set in the plane.

    ``params`` depends on ``variant``; ``g_star`` is the minimal degree of its
    vanishing ideal.  ``custom`` shapes carry a sampler ``t -> (m, 2)`` on
    ``[0, 1]`` and, optionally, generator coefficients.
    """

    variant: str
    params: dict = field(default_factory=dict)
    g_star: int = 2
    sampler: Optional[Callable] = field(default=None, compare=False)
    coeffs: Optional[tuple] = None

    d = 2

    def to_dict(self) -> dict:
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()}
        return {"variant": self.variant, "params": params, "g_star": self.g_star}


def circle(center=(0.0, 0.0), radius: float = 1.0) -> ShapeSpec:
    if not radius > 0:
        raise ValueError("radius must be positive")
    return ShapeSpec("circle", {"center": tuple(map(float, center)), "radius": float(radius)}, 2)


def cross() -> ShapeSpec:
    return ShapeSpec("cross", {}, 2)


def three_lines(angles=(0.0, math.pi / 3, 2 * math.pi / 3), offsets=(0.0, 0.5, -0.5)) -> ShapeSpec:
    """Lines ``-sin(a) x + cos(a) y = c`` for each angle ``a`` and offset ``c``."""
    angles = tuple(float(a) for a in angles)
    offsets = tuple(float(c) for c in offsets)
    if len(angles) != 3 or len(offsets) != 3:
        raise ValueError("three_lines needs three angles and three offsets")
    for i in range(3):
        for j in range(i + 1, 3):
            diff = (angles[i] - angles[j]) % math.pi
            if min(diff, math.pi - diff) < 1e-9:
                raise ValueError("line angles must be pairwise distinct mod pi")
    return ShapeSpec("three_lines", {"angles": angles, "offsets": offsets}, 3)


def concentric_circles(r1: float = 1.0, r2: float = 2.0) -> ShapeSpec:
    if not (r1 > 0 and r2 > 0) or r1 == r2:
        raise ValueError("radii must be positive and distinct")
    return ShapeSpec("concentric_circles", {"r1": float(r1), "r2": float(r2)}, 4)


def affine_line(direction=(1.0, 0.0), offset: float = 0.0) -> ShapeSpec:
    """Line with the given direction at signed distance ``offset`` from 0."""
    u = np.asarray(direction, dtype=float)
    if np.linalg.norm(u) == 0:
        raise ValueError("direction must be nonzero")
    u = u / np.linalg.norm(u)
    return ShapeSpec("affine_line", {"direction": tuple(u), "offset": float(offset)}, 1)


def custom(sampler: Callable, g_star: int, coeffs=None) -> ShapeSpec:
    return ShapeSpec("custom", {}, int(g_star), sampler=sampler,
                     coeffs=None if coeffs is None else tuple(coeffs))


SHAPES = {
    "circle": circle,
    "cross": cross,
    "three_lines": three_lines,
    "three-lines": three_lines,
    "concentric": concentric_circles,
    "concentric_circles": concentric_circles,
    "line": affine_line,
    "affine_line": affine_line,
}


def shape_from_name(name: str) -> ShapeSpec:
    try:
        return SHAPES[name]()
    except KeyError:
        raise ValueError(f"unknown shape {name!r}; choose from {sorted(SHAPES)}") from None


def _split(n: int, m: int) -> list:
    """First ``n % m`` components get ``ceil(n/m)`` points, the rest floor."""
    base, extra = divmod(n, m)
    return [base + (1 if k < extra else 0) for k in range(m)]


def _segment_in_window(point, direction, half=WINDOW):
    """Parameter range ``[t0, t1]`` keeping ``point + t direction`` in the box."""
    lo, hi = -np.inf, np.inf
    for p, u in zip(point, direction):
        if abs(u) < 1e-15:
            if abs(p) > half:
                raise ValueError("line misses the sampling window")
            continue
        a, b = (-half - p) / u, (half - p) / u
        lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
    if not lo < hi:
        raise ValueError("line misses the sampling window")
    return lo, hi


def _line_components(shape: ShapeSpec):
    """``(point, unit direction)`` for each line component."""
    if shape.variant == "cross":
        s = 1 / math.sqrt(2)
        return [((0.0, 0.0), (s, s)), ((0.0, 0.0), (s, -s))]
    if shape.variant == "three_lines":
        out = []
        for a, c in zip(shape.params["angles"], shape.params["offsets"]):
            normal = (-math.sin(a), math.cos(a))
            out.append(((c * normal[0], c * normal[1]), (math.cos(a), math.sin(a))))
        return out
    u = shape.params["direction"]
    normal = (-u[1], u[0])
    c = shape.params["offset"]
    return [((c * normal[0], c * normal[1]), tuple(u))]


def sample_latent(shape: ShapeSpec, n: int, seed) -> np.ndarray:
    """Draw ``n`` points uniformly (by arc or segment length) from ``shape``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    v = shape.variant
    if v == "circle":
        theta = rng.uniform(0.0, 2 * math.pi, n)
        cx, cy = shape.params["center"]
        r = shape.params["radius"]
        return np.column_stack([cx + r * np.cos(theta), cy + r * np.sin(theta)])
    if v == "concentric_circles":
        parts = []
        for r, m in zip((shape.params["r1"], shape.params["r2"]), _split(n, 2)):
            theta = rng.uniform(0.0, 2 * math.pi, m)
            parts.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
        return np.vstack(parts)
    if v == "cross":
        parts = []
        for sign, m in zip((1.0, -1.0), _split(n, 2)):
            x = rng.uniform(-WINDOW, WINDOW, m)
            parts.append(np.column_stack([x, sign * x]))
        return np.vstack(parts)
    if v in ("three_lines", "affine_line"):
        comps = _line_components(shape)
        parts = []
        for (p, u), m in zip(comps, _split(n, len(comps))):
            t0, t1 = _segment_in_window(p, u)
            t = rng.uniform(t0, t1, m)
            parts.append(np.column_stack([p[0] + t * u[0], p[1] + t * u[1]]))
        return np.vstack(parts)
    if v == "custom":
        pts = np.asarray(shape.sampler(rng.uniform(0.0, 1.0, n)), dtype=float)
        if pts.shape[0] != n:
            raise ValueError("custom sampler returned the wrong number of points")
        return pts
    raise ValueError(f"unknown shape variant {v!r}")


def noise_factor(noise: NoiseModel, d: int) -> np.ndarray:
    """``L`` with ``L L^T = Sigma`` (Cholesky, eigen-root when singular)."""
    cov = noise.covariance(d)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        w, q = np.linalg.eigh(cov)
        if w.min() < -1e-10:
            raise ValueError("covariance is not positive semidefinite") from None
        return q * np.sqrt(np.clip(w, 0.0, None))


def add_noise(latent, noise: NoiseModel, seed) -> np.ndarray:
    """``latent + eps`` with rows of ``eps`` iid ``N(0, Sigma)``."""
    latent = np.asarray(latent, dtype=float)
    n, d = latent.shape
    if noise.is_zero():
        return latent.copy()
    rng = make_rng(seed)
    z = rng.standard_normal((n, d))
    if noise.kind == "isotropic":
        return latent + math.sqrt(noise.value) * z
    if noise.kind == "diagonal":
        return latent + z * np.sqrt(noise.variances(d))
    return latent + z @ noise_factor(noise, d).T


def make_dataset(shape: ShapeSpec, n: int, noise: NoiseModel, seed: int) -> Dataset:
    """Latent sample plus noise, from two independent streams of ``seed``."""
    latent = sample_latent(shape, n, [int(seed), 0])
    observed = add_noise(latent, noise, [int(seed), 1])
    return Dataset(observed, latent, noise, int(seed))


def reference_sample(shape: ShapeSpec, m: int) -> np.ndarray:
    """About ``m`` evenly spaced points of the shape inside the window."""
    v = shape.variant
    if v == "circle":
        t = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
        cx, cy = shape.params["center"]
        r = shape.params["radius"]
        return np.column_stack([cx + r * np.cos(t), cy + r * np.sin(t)])
    if v == "concentric_circles":
        parts = []
        for r, k in zip((shape.params["r1"], shape.params["r2"]), _split(m, 2)):
            t = np.linspace(0.0, 2 * math.pi, k, endpoint=False)
            parts.append(np.column_stack([r * np.cos(t), r * np.sin(t)]))
        return np.vstack(parts)
    if v in ("cross", "three_lines", "affine_line"):
        comps = _line_components(shape)
        parts = []
        for (p, u), k in zip(comps, _split(m, len(comps))):
            t0, t1 = _segment_in_window(p, u)
            t = np.linspace(t0, t1, k)
            parts.append(np.column_stack([p[0] + t * u[0], p[1] + t * u[1]]))
        return np.vstack(parts)
    if v == "custom":
        return np.asarray(shape.sampler(np.linspace(0.0, 1.0, m)), dtype=float)
    raise ValueError(f"unknown shape variant {v!r}")


def canonical_polynomial_sign(coeffs, basis: MonomialBasis, rel_tol: float = 1e-12) -> np.ndarray:
    """Flip ``coeffs`` so the first nonzero entry of its top-degree block is
    positive."""
    coeffs = np.array(coeffs, dtype=float)
    scale = np.max(np.abs(coeffs), initial=0.0)
    if scale == 0:
        return coeffs
    nonzero = np.abs(coeffs) > rel_tol * scale
    degrees = basis.degrees
    top = degrees[nonzero].max()
    first = np.flatnonzero(nonzero & (degrees == top))[0]
    return -coeffs if coeffs[first] < 0 else coeffs


def _affine(a0, a1, a2, basis1):
    v = np.zeros(len(basis1))
    v[basis1.rank((0, 0))] = a0
    v[basis1.rank((1, 0))] = a1
    v[basis1.rank((0, 1))] = a2
    return v


def reference_factors(shape: ShapeSpec) -> list:
    """Factor coefficient vectors (each over its own degree) whose product
    generates the shape's ideal."""
    b1 = build_basis(2, 1)
    v = shape.variant
    if v == "circle":
        cx, cy = shape.params["center"]
        r = shape.params["radius"]
        b2 = build_basis(2, 2)
        c = np.zeros(len(b2))
        c[b2.rank((0, 0))] = cx * cx + cy * cy - r * r
        c[b2.rank((1, 0))] = -2 * cx
        c[b2.rank((0, 1))] = -2 * cy
        c[b2.rank((2, 0))] = 1.0
        c[b2.rank((0, 2))] = 1.0
        return [c]
    if v == "concentric_circles":
        b2 = build_basis(2, 2)
        out = []
        for r in (shape.params["r1"], shape.params["r2"]):
            c = np.zeros(len(b2))
            c[b2.rank((0, 0))] = -r * r
            c[b2.rank((2, 0))] = 1.0
            c[b2.rank((0, 2))] = 1.0
            out.append(c)
        return out
    if v in ("cross", "three_lines", "affine_line"):
        if v == "cross":
            return [_affine(0.0, 1.0, -1.0, b1), _affine(0.0, 1.0, 1.0, b1)]
        out = []
        for p, u in _line_components(shape):
            normal = (-u[1], u[0])
            out.append(_affine(-(normal[0] * p[0] + normal[1] * p[1]), normal[0], normal[1], b1))
        return out
    raise ValueError(f"no reference factors for variant {v!r}")


def reference_coeffs(shape: ShapeSpec, basis: MonomialBasis) -> np.ndarray:
    """Unit-norm generator coefficients over ``basis`` (degree ``g_star``)."""
    if basis.g != shape.g_star:
        raise ValueError(f"basis degree {basis.g} != minimal degree {shape.g_star}")
    if shape.variant == "custom":
        if shape.coeffs is None:
            raise ValueError("custom shape has no reference coefficients")
        c = np.asarray(shape.coeffs, dtype=float)
    else:
        from .estimators.polynomials import multiply_polynomials

        factors = reference_factors(shape)
        c = factors[0]
        for f in factors[1:]:
            c = multiply_polynomials(c, f, basis.d)
    if c.shape != (len(basis),):
        raise ValueError("reference coefficients do not match the basis")
    c = c / np.linalg.norm(c)
    return canonical_polynomial_sign(c, basis)
