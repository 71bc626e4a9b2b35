"""Static SVG pictures of sampled limit sets and domains in an affine chart.

Each layer is a single ``<path>`` element, so the output is easy to diff and
to check structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import quoteattr

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .anosov import BoundarySample
from .errors import BadInput
from .hilbert import ConvexBody

LAYERS = ("xi_points", "eta_lines", "hull", "omega_outline")
STYLE = {
    "xi_points": 'fill="black" stroke="none"',
    "eta_lines": 'fill="none" stroke="#4a7ab0" stroke-width="0.5" stroke-opacity="0.6"',
    "hull": 'fill="#f2c14e" fill-opacity="0.35" stroke="#b8860b" stroke-width="1"',
    "omega_outline": 'fill="none" stroke="#c0392b" stroke-width="1.5"',
}


class UnsupportedDimension(BadInput):
    pass


@dataclass
class RenderSpec:
    width: int = 512
    height: int = 512
    layers: Sequence[str] = LAYERS
    chart: np.ndarray | None = None
    slice: np.ndarray | None = None  # d x 3 matrix for d > 3
    dot_radius: float = 1.5

    def __post_init__(self):
        for n in (self.width, self.height):
            if not 64 <= n <= 8192:
                raise BadInput("width and height must lie in [64, 8192]")
        bad = set(self.layers) - set(LAYERS)
        if bad:
            raise BadInput(f"unknown layers {sorted(bad)}")


def _project(samples, omega, spec: RenderSpec):
    d = samples[0].dim if samples else (omega.d if omega is not None else 3)
    xi = np.array([s.xi for s in samples]).reshape(-1, d)
    eta = np.array([s.eta for s in samples]).reshape(-1, d)
    hrep = omega.hrep if omega is not None and omega.hrep is not None else None
    if d != 3:
        if spec.slice is None:
            raise UnsupportedDimension(f"d = {d} needs a 3-dimensional slice")
        p = np.linalg.qr(np.asarray(spec.slice, dtype=float))[0]
        if p.shape != (d, 3):
            raise BadInput(f"slice must be a {d} x 3 matrix")
        # orthogonal projection of points, restriction of covectors
        xi, eta = xi @ p, eta @ p
        hrep = None if hrep is None else hrep @ p
    return xi, eta, hrep


def _default_chart(xi, eta, samples, omega):
    if omega is not None and omega.d == 3:
        return omega.chart
    if samples and all(s.lifted for s in samples):
        c = eta.sum(axis=0)
        if np.all(xi @ c > 0):
            return c
    if len(xi):
        return np.linalg.svd(xi, full_matrices=False)[2][0]
    return np.array([0.0, 0.0, 1.0])


def _frame(chart):
    c = np.asarray(chart, dtype=float)
    c = c / np.linalg.norm(c)
    basis = np.linalg.svd(c[None, :])[2][1:].T
    return c, c / (c @ c), basis


def _clip(poly: np.ndarray, a: np.ndarray, b: float) -> np.ndarray:
    """Sutherland-Hodgman: keep the part of a convex polygon with ``a.x + b >= 0``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = a @ p + b, a @ q + b
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return np.array(out).reshape(-1, 2)


def _line_segment(a, b, box):
    """Portion of ``{a.x + b = 0}`` inside the box, or None."""
    (x0, y0), (x1, y1) = box
    pts = []
    if abs(a[1]) > 1e-15:
        for x in (x0, x1):
            y = -(a[0] * x + b) / a[1]
            if y0 - 1e-12 <= y <= y1 + 1e-12:
                pts.append((x, y))
    if abs(a[0]) > 1e-15:
        for y in (y0, y1):
            x = -(a[1] * y + b) / a[0]
            if x0 - 1e-12 <= x <= x1 + 1e-12:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    pts = np.array(pts)
    i, j = np.unravel_index(np.argmax(((pts[:, None] - pts[None]) ** 2).sum(-1)), (len(pts),) * 2)
    return pts[i], pts[j]


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def render_svg(
    samples: Sequence[BoundarySample] = (),
    omega: ConvexBody | None = None,
    spec: RenderSpec | None = None,
) -> str:
    """SVG document for the samples (and optionally a domain) in an affine chart."""
    spec = spec or RenderSpec()
    samples = list(samples)
    xi, eta, hrep = _project(samples, omega, spec)
    chart = spec.chart if spec.chart is not None else _default_chart(xi, eta, samples, omega)
    c, origin, basis = _frame(chart)

    pts = np.zeros((0, 2))
    if len(xi):
        cx = xi @ c
        keep = np.abs(cx) > 1e-12
        pts = ((xi[keep] / cx[keep, None]) - origin) @ basis
    if len(pts):
        lo, hi = pts.min(axis=0), pts.max(axis=0)
    else:
        lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    span = np.maximum(hi - lo, 1e-9)
    lo, hi = lo - 0.1 * span.max(), hi + 0.1 * span.max()
    scale = min(spec.width / (hi - lo)[0], spec.height / (hi - lo)[1])

    def px(p):
        return (p[0] - lo[0]) * scale, spec.height - (p[1] - lo[1]) * scale

    box = (lo, hi)
    paths: dict[str, str] = {name: "" for name in spec.layers}

    if "xi_points" in paths:
        r = spec.dot_radius
        paths["xi_points"] = " ".join(
            f"M{_fmt(x - r)},{_fmt(y)} a{_fmt(r)},{_fmt(r)} 0 1,0 {_fmt(2 * r)},0 "
            f"a{_fmt(r)},{_fmt(r)} 0 1,0 {_fmt(-2 * r)},0"
            for x, y in map(px, pts)
        )

    def chart_line(f):
        return f @ basis, float(f @ origin)

    if "eta_lines" in paths:
        segs = []
        for f in eta:
            seg = _line_segment(*chart_line(f), box)
            if seg is not None:
                (x0, y0), (x1, y1) = px(seg[0]), px(seg[1])
                segs.append(f"M{_fmt(x0)},{_fmt(y0)} L{_fmt(x1)},{_fmt(y1)}")
        paths["eta_lines"] = " ".join(segs)

    if "hull" in paths and len(pts) >= 3:
        try:
            poly = pts[ConvexHull(pts).vertices]
        except QhullError:
            poly = pts[[int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))]]
        paths["hull"] = _polygon(poly, px)

    if "omega_outline" in paths and hrep is not None:
        poly = np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
        for f in hrep:
            poly = _clip(poly, *chart_line(f))
            if not len(poly):
                break
        if len(poly) >= 3:
            paths["omega_outline"] = _polygon(poly, px)

    body = "\n".join(
        f'  <path id="{name}" {STYLE[name]} d={quoteattr(d)}/>' for name, d in paths.items()
    )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">\n'
        f'  <rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
    )


def _polygon(poly, px) -> str:
    coords = [px(p) for p in poly]
    head = f"M{_fmt(coords[0][0])},{_fmt(coords[0][1])}"
    rest = " ".join(f"L{_fmt(x)},{_fmt(y)}" for x, y in coords[1:])
    return f"{head} {rest} Z"


def chart_points(samples: Sequence[BoundarySample], chart) -> np.ndarray:
    """Affine chart coordinates of the xi samples, as used by :func:`render_svg`."""
    c, origin, basis = _frame(chart)
    xi = np.array([s.xi for s in samples])
    return (xi / (xi @ c)[:, None] - origin) @ basis
