"""Static SVG figures: observations, latent points and estimated sets."""

from __future__ import annotations

import datetime

import numpy as np

__all__ = ["COLORS", "render_svg"]

COLORS = {
    "latent": "#2ca02c",
    "data": "#000000",
    "estimate": "#1f4fd1",
    "naive": "#d62728",
    "tube": "#7b2fa6",
}

SIZE = 600
MARGIN = 40


class _Frame:
    """Affine map from data coordinates to the pixel canvas (y up)."""

    def __init__(self, arrays, window=None):
        if window is None:
            pts = [a for a in arrays if a is not None and len(a)]
            allp = np.vstack(pts) if pts else np.array([[-1.0, -1.0], [1.0, 1.0]])
            lo, hi = allp.min(axis=0), allp.max(axis=0)
            pad = 0.05 * max(float((hi - lo).max()), 1e-9)
            window = ((lo[0] - pad, hi[0] + pad), (lo[1] - pad, hi[1] + pad))
        (self.x0, self.x1), (self.y0, self.y1) = window
        span = max(self.x1 - self.x0, self.y1 - self.y0)
        self.k = (SIZE - 2 * MARGIN) / span

    def __call__(self, p):
        p = np.asarray(p, dtype=float).reshape(-1, 2)
        px = MARGIN + (p[:, 0] - self.x0) * self.k
        py = SIZE - MARGIN - (p[:, 1] - self.y0) * self.k
        return np.column_stack([px, py])


def _path(pix, closed):
    parts = [f"M{pix[0, 0]:.2f},{pix[0, 1]:.2f}"]
    parts += [f"L{x:.2f},{y:.2f}" for x, y in pix[1:]]
    if closed:
        parts.append("Z")
    return " ".join(parts)


def _is_closed(line, tol=1e-9):
    return len(line) > 2 and np.linalg.norm(line[0] - line[-1]) <= tol


def render_svg(data=None, latent=None, curves=(), naive_curves=(), tube=(),
               window=None, title="", deterministic=False, warnings=()) -> str:
    """Standalone SVG document.

    ``curves``/``naive_curves`` are polylines drawn as strokes; ``tube``
    polylines are filled together with the even-odd rule.
    """
    curves = [np.asarray(c, dtype=float).reshape(-1, 2) for c in curves]
    naive_curves = [np.asarray(c, dtype=float).reshape(-1, 2) for c in naive_curves]
    tube = [np.asarray(c, dtype=float).reshape(-1, 2) for c in tube]
    frame = _Frame([data, latent, *curves, *naive_curves, *tube], window)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if not deterministic:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        out.append(f"<metadata>generated {stamp}</metadata>")
    for w in warnings:
        out.append(f"<!-- warning: {w} -->")
    out.append(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>')
    if title:
        out.append(f'<text x="{MARGIN}" y="24" font-size="14" font-family="sans-serif">{title}</text>')
    legend = []
    if tube:
        d = " ".join(_path(frame(t), True) for t in tube if len(t) > 1)
        out.append(f'<path class="tube" d="{d}" fill="{COLORS["tube"]}" fill-opacity="0.35" '
                   f'fill-rule="evenodd" stroke="{COLORS["tube"]}" stroke-width="1"/>')
        legend.append(("tube", "tube"))
    if data is not None and len(data):
        out.append(f'<g class="data" fill="{COLORS["data"]}">')
        out += [f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.6"/>' for x, y in frame(data)]
        out.append("</g>")
        legend.append(("data", "observations"))
    if latent is not None and len(latent):
        out.append(f'<g class="latent" fill="{COLORS["latent"]}">')
        out += [f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.2"/>' for x, y in frame(latent)]
        out.append("</g>")
        legend.append(("latent", "latent"))
    for kind, lines in (("naive", naive_curves), ("estimate", curves)):
        for line in lines:
            if len(line) < 2:
                continue
            out.append(f'<path class="{kind}" d="{_path(frame(line), _is_closed(line))}" '
                       f'fill="none" stroke="{COLORS[kind]}" stroke-width="2"/>')
        if any(len(line) > 1 for line in lines):
            legend.append((kind, kind))
    for i, (key, text) in enumerate(legend):
        y = MARGIN + 16 * i
        out.append(f'<rect class="legend" x="{SIZE - 150}" y="{y - 9}" width="10" height="10" '
                   f'fill="{COLORS[key]}"/>')
        out.append(f'<text x="{SIZE - 135}" y="{y}" font-size="12" font-family="sans-serif">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
