"""Entropy counts, gap-rigidity scans, Frenet flags and dynamical decay rates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .errors import BadInput, BadPartition, BadRank, InsufficientData, NonConvergent, NotLoxodromic
from .hilbert import ConvexBody, _pair_distances, _prepare
from .projlin import as_array, spectrum
from .wordgroup import (
    Representation,
    class_spectra,
    cyclic_reduce,
    evaluate_ball,
    evaluate_pair,
    format_word,
    parse_word,
)

TIE_GAP = 1e-6
TIE_NUDGE = 1e-5
MIN_COUNT = 10

# ---------------------------------------------------------------- entropy


@dataclass(frozen=True)
class EntropyReport:
    """Class counts ``N(r)`` on a threshold grid with a fitted growth rate.

    ``complete_below`` is the smallest value among classes of maximal cyclic
    length: below it no class outside the enumerated ball can contribute,
    assuming values grow with length. ``grid_sensitivity`` is the change in
    slope when only the top quarter of the grid is fitted.
    """

    thresholds: np.ndarray
    counts: np.ndarray
    slope_estimate: float
    bound: int
    complete_below: float
    grid_sensitivity: float

    def rows(self):
        return list(zip(self.thresholds.tolist(), self.counts.tolist()))


def tie_free(grid, *value_sets) -> np.ndarray:
    """Nudge each threshold up by 1e-5 until it is 1e-6 away from every value.

    ``value_sets`` are ``(values, scale)`` pairs; threshold r is compared with
    ``values`` after division by ``scale``.
    """
    out = []
    for r in np.asarray(grid, dtype=float):
        while any(
            np.any(np.abs(np.asarray(v) - r / s) < TIE_GAP / s) for v, s in value_sets
        ):
            r += TIE_NUDGE
        out.append(r)
    return np.array(out)


def count_below(values, thresholds) -> np.ndarray:
    return np.searchsorted(np.sort(values), thresholds, side="right")


def _fit_slope(thresholds: np.ndarray, counts: np.ndarray, frac: float = 0.5) -> float:
    n = len(thresholds)
    sel = np.arange(n) >= int(n * (1 - frac))
    sel &= counts >= MIN_COUNT
    if sel.sum() < 2:
        return math.nan
    return float(np.polyfit(thresholds[sel], np.log(counts[sel]), 1)[0])


def spread_values(rep: Representation, radius: int, *, symmetric=False, workers=1):
    """``(1/2) log(lambda_1/lambda_d)`` and cyclic length for every class."""
    data = class_spectra(rep, radius, symmetric=symmetric, workers=workers)
    vals = np.array([s.half_log_spread() for _, s in data])
    lens = np.array([c.length for c, _ in data])
    return vals, lens


def _report(vals, lens, radius, grid, bound) -> EntropyReport:
    complete = float(vals[lens == radius].min()) if np.any(lens == radius) else float(vals.max())
    if grid is None:
        grid = np.linspace(complete / 4, complete, 24)
    grid = tie_free(grid, (vals, 1.0))
    counts = count_below(vals, grid)
    if counts[-1] < MIN_COUNT:
        raise InsufficientData(f"only {counts[-1]} classes below the top threshold")
    slope = _fit_slope(grid, counts)
    quarter = _fit_slope(grid, counts, 0.25)
    return EntropyReport(
        thresholds=grid,
        counts=counts,
        slope_estimate=slope,
        bound=bound,
        complete_below=complete,
        grid_sensitivity=abs(quarter - slope) if math.isfinite(quarter) else math.nan,
    )


def entropy_estimate(
    rep: Representation, radius: int, grid=None, *, symmetric: bool = False, workers: int = 1
) -> EntropyReport:
    """Growth rate of ``#{[g] : (1/2) log(lambda_1/lambda_d) <= r}``.

    The default grid runs up to the completeness level of the ball.
    """
    if radius < 4:
        raise BadInput("radius must be at least 4")
    vals, lens = spread_values(rep, radius, symmetric=symmetric, workers=workers)
    return _report(vals, lens, radius, grid, rep.dim - 2)


@dataclass(frozen=True)
class ScalingCheck:
    thresholds: np.ndarray
    counts: np.ndarray
    base_counts: np.ndarray

    @property
    def match(self) -> bool:
        return bool(np.array_equal(self.counts, self.base_counts))


def entropy_scaling_check(base: Representation, d: int, radius: int, grid=None) -> ScalingCheck:
    """Compare ``N_{tau_d o base}(r)`` with ``N_base(r/(d-1))`` on a tie-free grid."""
    from .families import tau_rep

    if base.dim != 2:
        raise BadInput("base representation must be 2-dimensional")
    lifted = tau_rep(base, d)
    v_base, lens = spread_values(base, radius)
    v_lift, _ = spread_values(lifted, radius)
    if grid is None:
        top = (d - 1) * float(v_base[lens == radius].min())
        grid = np.linspace(top / 8, top, 32)
    grid = tie_free(grid, (v_lift, 1.0), (v_base, d - 1.0))
    return ScalingCheck(grid, count_below(v_lift, grid), count_below(v_base, grid / (d - 1)))


def orbit_entropy(
    rep: Representation, body: ConvexBody, radius: int, grid=None, *, base_point=None
) -> EntropyReport:
    """Growth rate of ``#{g : H(p, g p) <= r}`` over the ball, for a body the group preserves."""
    p = body.witness if base_point is None else np.asarray(base_point, dtype=float)
    vals, lens = [], []
    for w, m, _ in evaluate_ball(rep, radius):
        if w:
            vals.append(m @ p)
            lens.append(len(w))
    pts = _prepare(body, vals)
    p0 = np.repeat(_prepare(body, [p]), len(pts), axis=0)
    dist = _pair_distances(body, p0, pts)
    lens = np.array(lens)
    complete = float(dist[lens == radius].min())
    if grid is None:
        grid = np.linspace(complete / 4, complete, 24)
    return _report(dist, lens, radius, grid, rep.dim - 2)


# --------------------------------------------------------------- rigidity


@dataclass(frozen=True)
class Witness:
    word: str
    top_ratio: float
    k_ratio: float

    @property
    def mismatch(self) -> float:
        return abs(math.log(self.top_ratio) - math.log(self.k_ratio))


@dataclass(frozen=True)
class RigidityScan:
    witnesses: list[Witness]
    max_mismatch: float
    checked: int


def rigidity_scan(
    rep: Representation,
    radius: int,
    k: int = 1,
    *,
    tol: float = 1e-6,
    symmetric: bool = False,
    workers: int = 1,
) -> RigidityScan:
    """Classes where ``lambda_1/lambda_2`` and ``lambda_{k+1}/lambda_{k+2}`` differ.

    A witness has ``|log(ratio) - log(ratio_k)| > tol``. Degenerate
    settings (d = 2 or k + 2 > d) report nothing.
    """
    if k < 1:
        raise BadRank("k must be at least 1")
    d = rep.dim
    if d == 2 or k + 2 > d:
        return RigidityScan([], 0.0, 0)
    wits = []
    worst = 0.0
    data = class_spectra(rep, radius, symmetric=symmetric, workers=workers)
    for cls, s in data:
        m = s.moduli
        w = Witness(str(cls), float(m[0] / m[1]), float(m[k] / m[k + 1]))
        worst = max(worst, w.mismatch)
        if w.mismatch > tol:
            wits.append(w)
    return RigidityScan(wits, worst, len(data))


# ------------------------------------------------------------------ flags


@dataclass(frozen=True, eq=False)
class Flag:
    """Nested subspaces: ``subspace(k)`` spans the top k eigendirections."""

    frame: np.ndarray  # orthonormal columns

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def subspace(self, k: int) -> np.ndarray:
        return self.frame[:, :k]


def flag_of(g, *, rel_tol: float = 1e-6) -> Flag:
    """Eigenvector flag ordered by descending modulus (requires distinct real eigenvalues)."""
    a = as_array(g)
    vals, vecs = np.linalg.eig(a)
    order = np.argsort(-np.abs(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    if np.any(np.abs(vals.imag) > 1e-8 * np.abs(vals)):
        raise NotLoxodromic("complex eigenvalues")
    mods = np.abs(vals)
    if np.any(mods[:-1] / mods[1:] - 1.0 <= rel_tol):
        raise NotLoxodromic("repeated eigenvalue moduli")
    q, _ = np.linalg.qr(vecs.real)
    return Flag(q)


def flag_transversality(flags: Sequence[Flag | None], partition: Sequence[int], tol: float = 1e-8) -> bool:
    """Whether ``xi^(k1)(x) + xi^(k2)(y) + xi^(k3)(z)`` is a direct sum equal to R^d."""
    if len(flags) != len(partition) or any(k < 0 for k in partition):
        raise BadPartition("need one nonnegative size per flag")
    present = [f for f in flags if f is not None]
    d = present[0].dim
    if sum(partition) != d:
        raise BadPartition(f"partition {tuple(partition)} does not sum to {d}")
    blocks = []
    for f, k in zip(flags, partition):
        if k:
            if f is None:
                raise BadPartition("missing flag for a nonzero part")
            blocks.append(f.subspace(k))
    return bool(np.linalg.svd(np.hstack(blocks), compute_uv=False).min() > tol)


# ----------------------------------------------------- dynamical rates


@dataclass(frozen=True)
class DecayRates:
    """Measured exponential decay of point and plane distances versus spectral predictions."""

    word: str
    point_rate: float
    plane_rate: float
    predicted_point: float  # log(lambda_2 / lambda_1)
    predicted_plane: float  # log(lambda_3 / lambda_2)

    def relative_errors(self) -> tuple[float, float]:
        return (
            abs(self.point_rate / self.predicted_point - 1.0),
            abs(self.plane_rate / self.predicted_plane - 1.0),
        )


def decay_rate(log_dist: Sequence[float], start: int = 0, *, agreement: float = 0.05) -> float:
    """Slope of ``log_dist[n]`` against n over the window, checked on both halves."""
    y = np.asarray(log_dist, dtype=float)
    n = np.arange(len(y))
    sel = n >= start
    xs, ys = n[sel], y[sel]
    half = len(xs) // 2
    rate = np.polyfit(xs, ys, 1)[0]
    r1 = np.polyfit(xs[:half], ys[:half], 1)[0]
    r2 = np.polyfit(xs[half:], ys[half:], 1)[0]
    if abs(r1 - r2) > agreement * abs(rate):
        raise NonConvergent(f"window halves give {r1:.6g} and {r2:.6g}")
    return float(rate)


def _mp_matrix(a) -> mpmath.matrix:
    return mpmath.matrix([[mpmath.mpf(float(x)) for x in row] for row in np.asarray(a)])


def _mp_word(rep: Representation, w) -> mpmath.matrix:
    m = mpmath.eye(rep.dim)
    for x in w:
        m = m * _mp_matrix(rep.generator(x))
    return m


def _orthonormal(cols: list) -> list:
    out = []
    for v in cols:
        for u in out:
            v = v - (u.T * v)[0] * u
        out.append(v / mpmath.norm(v))
    return out


def _mp_flag(m: mpmath.matrix, k: int):
    """Top-k eigenvectors (orthonormalized) and sorted moduli, at working precision."""
    vals, vecs = mpmath.eig(m)
    order = sorted(range(len(vals)), key=lambda i: -abs(vals[i]))
    cols = [mpmath.matrix([mpmath.re(vecs[r, i]) for r in range(m.rows)]) for i in order[:k]]
    return _orthonormal(cols), [abs(vals[i]) for i in order]


def hitchin_xi2_gap(
    rep: Representation,
    word,
    *,
    seed_word=None,
    seed=None,
    n_max: int = 60,
) -> DecayRates:
    """Measure how fast ``g^n`` pulls a point and a 2-plane onto its attracting flag.

    The distances decay like ``(lambda_2/lambda_1)^n`` and
    ``(lambda_3/lambda_2)^n``. Iteration runs in mpmath at a precision large
    enough to resolve both after ``n_max`` steps. The seed is the attracting
    line and 2-plane of ``seed_word`` (by default a generator not conjugate
    into the cyclic subgroup of ``word``), an explicit ``(point, plane)``
    pair, or a fixed generic pair for rank-one representations.
    """
    d = rep.dim
    if d < 3:
        raise BadRank("need d >= 3")
    w = parse_word(word, rep.rank) if isinstance(word, str) else tuple(word)
    s = spectrum(*evaluate_pair(rep, w))
    mods = s.moduli
    if np.any(mods[:2] / mods[1:3] - 1.0 <= 1e-6) or not s.proximal:
        raise NotLoxodromic("need lambda_1 > lambda_2 > lambda_3")
    digits = n_max * math.log10(mods[0] / mods[-1]) + 30
    with mpmath.workdps(int(digits)):
        g = _mp_word(rep, w)
        top, mp_mods = _mp_flag(g, 2)
        x0, plane0 = _seed(rep, w, seed_word, seed, d)
        x = x0
        b = plane0
        dp, dq = [], []
        for _ in range(n_max + 1):
            xu = x / mpmath.norm(x)
            resid = xu - (top[0].T * xu)[0] * top[0]
            dp.append(float(mpmath.log(mpmath.norm(resid))))
            total = mpmath.mpf(0)
            for col in b:
                r = col - sum(((u.T * col)[0] * u for u in top), mpmath.matrix(d, 1))
                total += mpmath.norm(r) ** 2
            dq.append(float(mpmath.log(mpmath.sqrt(total))))
            x = g * xu
            b = _orthonormal([g * col for col in b])
        pred_p = float(mpmath.log(mp_mods[1] / mp_mods[0]))
        pred_q = float(mpmath.log(mp_mods[2] / mp_mods[1]))
    start = n_max // 3
    return DecayRates(
        word=format_word(w),
        point_rate=decay_rate(dp, start),
        plane_rate=decay_rate(dq, start),
        predicted_point=pred_p,
        predicted_plane=pred_q,
    )


def _seed(rep, w, seed_word, seed, d):
    if seed is not None:
        point, plane = seed
        x0 = mpmath.matrix([mpmath.mpf(float(v)) for v in point])
        cols = [mpmath.matrix([mpmath.mpf(float(v)) for v in c]) for c in np.asarray(plane).T]
        return x0, _orthonormal(cols)
    if seed_word is None and rep.rank > 1:
        # a generator whose attracting line differs from that of w
        core = set(abs(x) for x in cyclic_reduce(w).canonical)
        seed_word = (next(k for k in range(1, rep.rank + 1) if {k} != core),)
    if seed_word is None:
        x0 = mpmath.matrix([mpmath.mpf(1)] * d)
        p2 = mpmath.matrix([mpmath.mpf(i + 1) for i in range(d)])
        return x0, _orthonormal([x0, p2])
    sw = parse_word(seed_word, rep.rank) if isinstance(seed_word, str) else tuple(seed_word)
    cols, _ = _mp_flag(_mp_word(rep, sw), 2)
    return cols[0], cols
