"""Hilbert geometry on properly convex bodies in P(R^d).

A :class:`ConvexBody` is cut out by linear functionals (``hrep``, the body is
where all of them are positive), optionally intersected with the positive
region of a Lorentzian quadratic form (``quadric``, for exact round cones
such as the Klein disk or the positive-definite cone), and may carry a
finite point sample (``vrep``). All metric computations happen in the affine
chart ``{v : chart(v) = 1}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, HalfspaceIntersection

from .errors import BadInput, DegenerateChart, ImproperBody, NotPreserved, PointOutside
from .projlin import as_array, spectrum

INTERIOR_TOL = 1e-13
PRESERVE_TOL = 1e-8


def _unit_rows(a) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return a / np.linalg.norm(a, axis=1, keepdims=True)


class ConvexBody:
    """Projective convex body ``{[v] : f_i(v) > 0 for all i, Q(v) > 0}``."""

    def __init__(self, hrep=None, vrep=None, chart=None, quadric=None, *, d: int | None = None):
        self.hrep = None if hrep is None or len(hrep) == 0 else _unit_rows(hrep)
        self.quadric = None if quadric is None else np.asarray(quadric, dtype=float)
        vr = None if vrep is None or len(vrep) == 0 else _unit_rows(vrep)
        dims = {a.shape[-1] for a in (self.hrep, vr, self.quadric) if a is not None}
        if d is not None:
            dims.add(d)
        if len(dims) != 1:
            raise BadInput(f"inconsistent or missing dimension: {dims}")
        self.d = dims.pop()
        if chart is None:
            chart = self._default_chart(vr)
        self.chart = np.asarray(chart, dtype=float) / np.linalg.norm(chart)
        if vr is not None:
            vr = vr * np.sign(vr @ self.chart)[:, None]
        self.vrep = vr

    # -------------------------------------------------------- chart

    def _default_chart(self, vrep) -> np.ndarray:
        if self.hrep is not None:
            c = self.hrep.sum(axis=0)
            if np.linalg.norm(c) > 1e-12:
                return c
        if self.quadric is not None:
            w, v = np.linalg.eigh(self.quadric)
            c = v[:, np.argmax(w)]
            if vrep is not None and np.sum(vrep @ c) < 0:
                c = -c
            return c
        if vrep is not None:
            # polar of an interior point of the sample
            ref = np.linalg.svd(vrep, full_matrices=False)[2][0]
            oriented = vrep * np.where(vrep @ ref >= 0, 1.0, -1.0)[:, None]
            return oriented.mean(axis=0)
        raise BadInput("cannot choose a chart for an empty body")

    @cached_property
    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        """Chart origin ``o`` (chart(o) = 1) and an orthonormal basis of ker(chart)."""
        c = self.chart
        o = c / (c @ c)
        basis = np.linalg.svd(c[None, :])[2][1:].T
        return o, basis

    def to_chart(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        cv = v @ self.chart
        if np.any(np.abs(cv) < 1e-300):
            raise DegenerateChart("point lies at infinity of the chart")
        return v / np.asarray(cv)[..., None] if v.ndim > 1 else v / cv

    def chart_coords(self, v) -> np.ndarray:
        o, basis = self.frame
        return (self.to_chart(v) - o) @ basis

    def from_chart_coords(self, x) -> np.ndarray:
        o, basis = self.frame
        return o + np.asarray(x) @ basis.T

    # ---------------------------------------------------- membership

    def margins(self, v) -> np.ndarray:
        """Values of the unit hrep functionals at the unit representative with chart > 0."""
        p = np.asarray(v, dtype=float)
        p = p / np.linalg.norm(p) * np.sign(p @ self.chart)
        return p @ self.hrep.T if self.hrep is not None else np.zeros(0)

    def quadric_value(self, v) -> float:
        p = np.asarray(v, dtype=float)
        p = p / np.linalg.norm(p)
        return float(p @ self.quadric @ p) if self.quadric is not None else 1.0

    def contains(self, v, tol: float = INTERIOR_TOL) -> bool:
        """Projective membership: some sign of v makes every constraint exceed tol."""
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        if self.quadric is not None and v @ self.quadric @ v <= tol:
            return False
        if self.hrep is None:
            return True
        m = v @ self.hrep.T
        return bool(np.all(m > tol) or np.all(m < -tol))

    def in_closure(self, v, tol: float = PRESERVE_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        if self.quadric is not None and v @ self.quadric @ v < -tol:
            return False
        if self.hrep is None:
            return True
        m = v @ self.hrep.T
        return bool(np.all(m >= -tol) or np.all(m <= tol))

    def on_boundary(self, v, tol: float = PRESERVE_TOL) -> bool:
        if not self.in_closure(v, tol):
            return False
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        vals = []
        if self.quadric is not None:
            vals.append(abs(v @ self.quadric @ v))
        if self.hrep is not None:
            vals.append(np.abs(v @ self.hrep.T).min())
        return bool(min(vals) <= tol)

    # ----------------------------------------------------- properness

    @cached_property
    def _properness(self) -> tuple[bool, np.ndarray | None]:
        if self.quadric is not None:
            w = np.linalg.eigvalsh(self.quadric)
            if not (np.sum(w > 0) == 1 and np.sum(w < 0) == self.d - 1):
                return False, None
            vals, vecs = np.linalg.eigh(self.quadric)
            x = vecs[:, np.argmax(vals)]
            if self.hrep is None:
                return True, x * np.sign(x @ self.chart)
            for s in (1.0, -1.0):
                if np.all(self.hrep @ (s * x) > 0):
                    return True, s * x
            if self.vrep is not None:
                m = self.vrep.mean(axis=0)
                if self.contains(m):
                    return True, m
            return False, None
        if self.hrep is None:
            return False, None
        f = self.hrep
        if np.linalg.matrix_rank(f, tol=1e-10) < self.d:
            return False, None
        # strict feasibility: f_i(v) >= 1 for all i
        res = linprog(
            c=np.zeros(self.d),
            A_ub=-f,
            b_ub=-np.ones(len(f)),
            bounds=[(None, None)] * self.d,
            method="highs",
        )
        if res.status != 0:
            return False, None
        return True, res.x / np.linalg.norm(res.x)

    @property
    def proper(self) -> bool:
        """The cone is pointed (functionals of full rank) with nonempty interior."""
        return self._properness[0]

    @property
    def witness(self) -> np.ndarray | None:
        return self._properness[1]

    def require_proper(self) -> None:
        if not self.proper:
            raise ImproperBody("body is not properly convex")

    # --------------------------------------------- vertex / facet data

    def vertices(self) -> np.ndarray:
        """Vertices of the hrep polytope (unit vectors, chart-positive)."""
        if self.hrep is None:
            raise BadInput("body has no hrep")
        self.require_proper()
        o, basis = self.frame
        if self.d == 2:
            return self._interval_ends()
        a = -(self.hrep @ basis)
        b = -(self.hrep @ o)
        interior = self.chart_coords(self.witness)
        hs = HalfspaceIntersection(np.column_stack([a, b]), interior)
        pts = self.from_chart_coords(hs.intersections)
        return _unit_rows(pts)

    def _interval_ends(self) -> np.ndarray:
        o, basis = self.frame
        x0 = self.chart_coords(self.witness)
        lo, hi = _chord_params(self, self.from_chart_coords(x0)[None], basis.T[:1])
        return _unit_rows(np.array([o + (x0 + lo[0]) @ basis.T, o + (x0 + hi[0]) @ basis.T]))

    def with_facets(self) -> "ConvexBody":
        """Same vrep, with hrep replaced by the facets of its convex hull in the chart."""
        if self.vrep is None:
            raise BadInput("body has no vrep")
        x = self.chart_coords(self.vrep)
        if self.d == 2:
            lo, hi = x[:, 0].min(), x[:, 0].max()
            eqs = np.array([[1.0, -hi], [-1.0, lo]])
        else:
            eqs = ConvexHull(x).equations
        _, basis = self.frame
        funcs = -(eqs[:, :-1] @ basis.T) - eqs[:, -1:] * self.chart[None, :]
        return ConvexBody(hrep=funcs, vrep=self.vrep, chart=self.chart, quadric=self.quadric)

    def transform(self, a) -> "ConvexBody":
        """Image of the body under the linear map ``a``."""
        a = as_array(a)
        ainv = np.linalg.inv(a)
        return ConvexBody(
            hrep=None if self.hrep is None else self.hrep @ ainv,
            vrep=None if self.vrep is None else self.vrep @ a.T,
            chart=self.chart @ ainv,
            quadric=None if self.quadric is None else ainv.T @ self.quadric @ ainv,
            d=self.d,
        )

    # ------------------------------------------------------------ io

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "hrep": [] if self.hrep is None else self.hrep.tolist(),
            "vrep": [] if self.vrep is None else self.vrep.tolist(),
            "chart": self.chart.tolist(),
        }
        if self.quadric is not None:
            out["quadric"] = self.quadric.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConvexBody":
        return cls(
            hrep=data.get("hrep") or None,
            vrep=data.get("vrep") or None,
            chart=data.get("chart"),
            quadric=data.get("quadric"),
            d=data.get("d"),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "ConvexBody":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        parts = [f"d={self.d}"]
        if self.hrep is not None:
            parts.append(f"{len(self.hrep)} functionals")
        if self.vrep is not None:
            parts.append(f"{len(self.vrep)} points")
        if self.quadric is not None:
            parts.append("quadric")
        return f"ConvexBody({', '.join(parts)})"


# ------------------------------------------------------ standard bodies


def klein_disk() -> ConvexBody:
    """Unit disk ``x^2 + y^2 < 1`` in the chart ``z = 1``."""
    return ConvexBody(quadric=np.diag([-1.0, -1.0, 1.0]), chart=[0.0, 0.0, 1.0])


def psd_cone(d: int = 2, vrep=None) -> ConvexBody:
    """Positive-definite cone in Sym_d(R), in the coordinates of ``sym_basis``.

    Exact (a quadric) for d = 2 only.
    """
    if d != 2:
        raise BadInput("exact quadric model available for d = 2 only")
    # det X = x z - y^2 / 2 for coordinates (x, y, z) = (X11, sqrt2 X12, X22)
    q = np.array([[0.0, 0.0, 0.5], [0.0, -0.5, 0.0], [0.5, 0.0, 0.0]])
    return ConvexBody(quadric=q, chart=[1.0, 0.0, 1.0], vrep=vrep)


def veronese_cone(vrep=None) -> ConvexBody:
    """Positive-definite binary quadratic forms ``a u^2 + b uw + c w^2`` (b^2 < 4ac)."""
    q = np.array([[0.0, 0.0, 2.0], [0.0, -1.0, 0.0], [2.0, 0.0, 0.0]])
    return ConvexBody(quadric=q, chart=[1.0, 0.0, 1.0], vrep=vrep)


def simplex(d: int) -> ConvexBody:
    """Positive orthant, hrep = coordinate functionals."""
    return ConvexBody(hrep=np.eye(d), vrep=np.eye(d))


def polygon_disk(n: int) -> ConvexBody:
    """Body cut out by n tangent lines of the unit circle (chart z = 1)."""
    th = 2 * np.pi * np.arange(n) / n
    f = np.column_stack([-np.cos(th), -np.sin(th), np.ones(n)])
    return ConvexBody(hrep=f, chart=[0.0, 0.0, 1.0])


# -------------------------------------------------------- chord roots


def _chord_params(body: ConvexBody, p: np.ndarray, u: np.ndarray):
    """Boundary parameters along ``p + t u`` (rows), nearest root below and above 0.

    Exact: roots of linear functionals and of the quadratic form.
    """
    n = len(p)
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    if body.hrep is not None:
        alpha = p @ body.hrep.T
        beta = u @ body.hrep.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -alpha / beta
        scale = np.abs(alpha) + np.abs(beta)
        moving = np.abs(beta) > 1e-15 * scale
        lo = np.maximum(lo, np.where(moving & (beta > 0), t, -np.inf).max(axis=1))
        hi = np.minimum(hi, np.where(moving & (beta < 0), t, np.inf).min(axis=1))
    if body.quadric is not None:
        q = body.quadric
        a = np.einsum("ni,ij,nj->n", p, q, p)
        b = np.einsum("ni,ij,nj->n", p, q, u)
        c = np.einsum("ni,ij,nj->n", u, q, u)
        disc = b * b - a * c
        ok = disc >= 0
        sq = np.sqrt(np.where(ok, disc, 0.0))
        qq = -(b + np.where(b >= 0, sq, -sq))
        with np.errstate(divide="ignore", invalid="ignore"):
            r1 = np.where(ok & (np.abs(c) > 0), qq / c, np.nan)
            r2 = np.where(ok & (qq != 0), a / qq, np.nan)
        for r in (r1, r2):
            lo = np.maximum(lo, np.where(r < 0, r, -np.inf))
            hi = np.minimum(hi, np.where(r > 0, r, np.inf))
    return lo, hi


def _inside_chart(body: ConvexBody, p: np.ndarray) -> np.ndarray:
    ok = np.ones(len(p), dtype=bool)
    norms = np.linalg.norm(p, axis=1)
    if body.hrep is not None:
        ok &= np.all(p @ body.hrep.T > INTERIOR_TOL * norms[:, None], axis=1)
    if body.quadric is not None:
        ok &= np.einsum("ni,ij,nj->n", p, body.quadric, p) > INTERIOR_TOL * norms**2
    return ok


def _pair_distances(body: ConvexBody, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # order each pair canonically so that H(p, q) and H(q, p) are bitwise equal
    diff = p != q
    first = np.argmax(diff, axis=1)
    rows = np.arange(len(p))
    swap = diff.any(axis=1) & (p[rows, first] > q[rows, first])
    p, q = np.where(swap[:, None], q, p), np.where(swap[:, None], p, q)
    u = q - p
    same = np.linalg.norm(u, axis=1) <= 1e-15 * np.linalg.norm(p, axis=1)
    lo, hi = _chord_params(body, p, np.where(same[:, None], 0.0, u))
    out = np.zeros(len(p))
    move = ~same
    unbounded = move & (~np.isfinite(lo) | ~np.isfinite(hi))
    if np.any(unbounded):
        if body.proper:
            raise DegenerateChart("chord leaves the chart inside the body")
        out[unbounded] = np.inf
    ok = move & ~unbounded
    a, b = lo[ok], hi[ok]
    # cross ratio [a, x, y, b] with x at t = 0 and y at t = 1
    out[ok] = 0.5 * (np.log(b) + np.log1p(-a) - np.log(-a) - np.log(b - 1.0))
    return out


def _prepare(body: ConvexBody, pts) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    cv = pts @ body.chart
    if np.any(np.abs(cv) < 1e-300):
        raise DegenerateChart("point at infinity of the chart")
    pts = pts / cv[:, None]
    if not np.all(_inside_chart(body, pts)):
        raise PointOutside("point is not strictly inside the body")
    return pts


def hilbert_distance(body: ConvexBody, p, q) -> float:
    """Half the log of the cross ratio of p, q and the two boundary points of their chord.

    Returns ``math.inf`` when the chord is unbounded in an improper body.
    """
    pts = _prepare(body, [p, q])
    return float(_pair_distances(body, pts[:1], pts[1:])[0])


def pairwise_distances(body: ConvexBody, points) -> np.ndarray:
    pts = _prepare(body, points)
    n = len(pts)
    i, j = np.triu_indices(n, 1)
    out = np.zeros((n, n))
    out[i, j] = _pair_distances(body, pts[i], pts[j])
    out[j, i] = out[i, j]
    return out


def gromov_product(body: ConvexBody, p, q, o) -> float:
    """``(p|q)_o = (H(p, o) + H(o, q) - H(p, q)) / 2``."""
    return 0.5 * (
        hilbert_distance(body, p, o) + hilbert_distance(body, o, q) - hilbert_distance(body, p, q)
    )


def four_point_delta(body: ConvexBody, points, *, bases=None) -> float:
    """Largest violation of the four-point condition over the sample.

    For every base o (all sample points unless ``bases`` lists indices) and
    all x, y, z: ``min((x|z)_o, (y|z)_o) - (x|y)_o``, clipped below at 0.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 4:
        raise BadInput("need at least 4 points")
    dist = pairwise_distances(body, pts)
    n = len(pts)
    best = 0.0
    for o in range(n) if bases is None else bases:
        g = 0.5 * (dist[:, o][:, None] + dist[o, :][None, :] - dist)
        for z in range(n):
            col = g[:, z]
            val = (np.minimum.outer(col, col) - g).max()
            best = max(best, float(val))
    return best


def distance_to_segment(body: ConvexBody, p, a, b, *, samples: int = 64) -> float:
    """``inf_s H(p, (1 - s) a + s b)`` over the chart segment [a, b]."""
    pa, pb = _prepare(body, [a, b])
    pp = _prepare(body, [p])

    def along(s):
        pt = ((1 - s) * pa + s * pb)[None]
        return float(_pair_distances(body, pp, pt)[0])

    grid = np.linspace(0.0, 1.0, samples)
    vals = np.array([along(s) for s in grid])
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, samples - 1)]
    # golden-section search with an absolute bracket tolerance (scipy's
    # bounded Brent adds a relative term of about 1.5e-8)
    r = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - r * (hi - lo), lo + r * (hi - lo)
    f1, f2 = along(x1), along(x2)
    while hi - lo > 1e-10:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - r * (hi - lo)
            f1 = along(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + r * (hi - lo)
            f2 = along(x2)
    return float(min(vals[k], f1, f2))


# --------------------------------------------------------------- duality


def dual_body(body: ConvexBody) -> ConvexBody:
    """Dual domain in P(R^{d*}): functionals positive on the closure of the body."""
    body.require_proper()
    if body.quadric is not None and body.hrep is None:
        q = np.linalg.inv(body.quadric)
        return ConvexBody(quadric=q, chart=body.witness, vrep=body.hrep)
    if body.hrep is None:
        raise ImproperBody("dual needs a functional description of the body")
    if body.quadric is not None:
        raise NotImplementedError("dual of a mixed quadric/polyhedral body")
    verts = body.vrep if body.vrep is not None else body.vertices()
    return ConvexBody(hrep=verts, vrep=body.hrep)


# ------------------------------------------------------------ hull test


@dataclass(frozen=True)
class HullResult:
    status: str  # "inside", "boundary" or "outside"
    witness: dict[int, float]
    residual: float


def caratheodory_reduce(points: np.ndarray, weights: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Shrink a nonnegative combination to one on linearly independent points."""
    w = weights.copy()
    w[w < tol] = 0.0
    while True:
        support = np.flatnonzero(w)
        sub = points[support].T
        if len(support) <= np.linalg.matrix_rank(sub, tol=1e-10):
            return w
        z = np.linalg.svd(sub)[2][-1]
        if z.max() <= 0:
            z = -z
        pos = z > 1e-14
        step = np.min(w[support][pos] / z[pos])
        w[support] -= step * z
        w[np.abs(w) < tol] = 0.0
        w[w < 0] = 0.0


def hull_membership(points, query, tol: float = 1e-9) -> HullResult:
    """Is ``query`` a nonnegative combination of the rows of ``points``?

    Inside when the nonnegative least-squares residual is below ``tol``
    (relative); boundary when it is below ``sqrt(tol)``. The witness uses at
    most d linearly independent points.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    q = np.asarray(query, dtype=float)
    w, resid = nnls(pts.T, q)
    rel = resid / max(np.linalg.norm(q), 1e-300)
    if rel <= tol:
        w = caratheodory_reduce(pts, w)
        return HullResult("inside", {int(i): float(w[i]) for i in np.flatnonzero(w)}, rel)
    status = "boundary" if rel <= math.sqrt(tol) else "outside"
    return HullResult(status, {}, rel)


# --------------------------------------------------- translation length


@dataclass(frozen=True)
class TranslationLength:
    sampled_min: float
    axis_value: float | None
    spectral: float


def _interior_samples(body: ConvexBody, n: int, rng) -> np.ndarray:
    out = [body.witness]
    if body.vrep is not None and len(body.vrep) >= 2:
        k = min(len(body.vrep), body.d + 1)
        while len(out) < n:
            idx = rng.choice(len(body.vrep), size=k, replace=False)
            x = rng.dirichlet(np.ones(k)) @ body.to_chart(body.vrep[idx])
            if body.contains(x):
                out.append(x)
    else:
        w = body.to_chart(body.witness)
        while len(out) < n:
            x = w + rng.normal(scale=0.3, size=body.d) / np.sqrt(body.d)
            if body.contains(x):
                out.append(x)
    return body.to_chart(np.array(out))


def translation_length(body: ConvexBody, g, orbit_samples: int = 256, *, seed: int = 0) -> TranslationLength:
    """Minimal displacement ``H(g x, x)`` over sampled interior points x.

    Also evaluates on the axis between the attracting and repelling lines
    when both lie on the boundary.
    """
    body.require_proper()
    g = as_array(g)
    if body.quadric is not None:
        moved = g.T @ body.quadric @ g
        c = float(np.sum(moved * body.quadric) / np.sum(body.quadric**2))
        if c <= 0 or np.abs(moved - c * body.quadric).max() > PRESERVE_TOL * np.abs(moved).max():
            raise NotPreserved("g does not preserve the quadric")
    probe = body.vrep if body.vrep is not None else body.witness[None]
    for v in probe:
        if not body.in_closure(g @ v):
            raise NotPreserved("g does not preserve the body")
    if not body.contains(g @ body.witness):
        raise NotPreserved("g moves the interior witness outside")
    rng = np.random.default_rng(seed)
    xs = _interior_samples(body, orbit_samples, rng)
    gx = body.to_chart(xs @ g.T)
    sampled = float(_pair_distances(body, xs, gx).min())

    ginv = np.linalg.inv(g)
    s = spectrum(g, ginv)
    axis = None
    if s.proximal:
        back = spectrum(ginv, g)
        if back.proximal:
            plus, minus = s.attracting_line, back.attracting_line
            if body.on_boundary(plus) and body.on_boundary(minus):
                for x in (plus + minus, plus - minus):
                    if body.contains(x):
                        axis = hilbert_distance(body, x, g @ x)
                        break
    return TranslationLength(sampled, axis, s.half_log_spread())
