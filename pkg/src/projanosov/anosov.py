"""Boundary maps, gap certificates, sign lifting and invariant domains.

Finite samples stand in for the Gromov boundary of a free group: each
biproximal conjugacy class contributes its attracting line ``xi`` and the
attracting point ``eta`` of the dual action, a covector whose kernel is the
repelling hyperplane. Everything built from them (the outer polyhedral
domain, the inner hull) approximates the limiting objects from outside and
inside.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    BadInput,
    EmptySamples,
    ImproperBody,
    LiftInconsistent,
    NoProximalElements,
)
from .hilbert import ConvexBody, hull_membership
from .projlin import spectrum, sym_coords, sym_matrix
from .wordgroup import (
    ConjClass,
    Representation,
    ball,
    class_spectra,
    cyclic_reduce,
    evaluate_pair,
    format_word,
    parse_word,
)

log = logging.getLogger(__name__)

LIFT_TOL = 1e-7
DEDUP_TOL = 1e-8
SUPPORT_TOL = 1e-6
HULL_TOL = 1e-9
CONTAINMENT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BoundarySample:
    """Attracting line and dual attracting covector of one conjugacy class."""

    word: str
    xi: np.ndarray
    eta: np.ndarray
    lifted: bool = False

    @property
    def dim(self) -> int:
        return len(self.xi)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def boundary_point(rep: Representation, word) -> BoundarySample | None:
    """Sample for a single word, or None when its image is not biproximal."""
    w = parse_word(word, rep.rank) if isinstance(word, str) else tuple(word)
    m, minv = evaluate_pair(rep, w)
    s = spectrum(m, minv)
    if not s.biproximal:
        return None
    return BoundarySample(format_word(w), s.attracting_line, s.attracting_functional)


def _dedup_key(v: np.ndarray) -> tuple:
    # sign fixed by the largest coordinate, then quantized
    k = int(np.argmax(np.abs(v)))
    v = v if v[k] > 0 else -v
    return tuple(np.round(v / DEDUP_TOL).astype(np.int64))


def sample_boundary(
    rep: Representation,
    radius: int,
    min_len: int = 1,
    *,
    workers: int = 1,
) -> list[BoundarySample]:
    """One sample per biproximal conjugacy class of cyclic length in [min_len, radius].

    Classes sharing an attracting line (powers of one element) are kept once,
    first in enumeration order.
    """
    if not 1 <= min_len <= radius:
        raise BadInput("need radius >= min_len >= 1")
    out = []
    seen = set()
    for cls, s in class_spectra(rep, radius, min_len=min_len, workers=workers):
        if not s.biproximal:
            continue
        key = _dedup_key(s.attracting_line)
        if key in seen:
            continue
        seen.add(key)
        out.append(BoundarySample(str(cls), s.attracting_line, s.attracting_functional))
    if not out:
        raise NoProximalElements(f"no biproximal element up to length {radius}")
    return out


# ------------------------------------------------------ gap certificate


@dataclass(frozen=True)
class GapCertificate:
    """Support line ``log(l1/l2) >= slope * length - intercept`` from below."""

    slope: float
    intercept: float
    min_normalized_gap: float
    points: list[tuple[int, float]]

    def holds(self, tol: float = 1e-12) -> bool:
        return all(y >= self.slope * x - self.intercept - tol for x, y in self.points)


def _lower_hull(xy: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    hull: list[tuple[float, float]] = []
    for p in sorted(xy):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def gap_certificate(rep: Representation, radius: int, *, workers: int = 1) -> GapCertificate:
    """Fit the asymptotic support line to (cyclic length, log lambda_1/lambda_2).

    Only the lowest gap at each length matters. The slope is that of the
    last edge of their lower convex hull, and the intercept makes the line
    touch that edge, so every sampled point lies on or above it.
    """
    if radius < 2:
        raise BadInput("radius must be at least 2")
    points = [
        (cls.length, s.log_gap(1)) for cls, s in class_spectra(rep, radius, workers=workers)
    ]
    lowest: dict[int, float] = {}
    for n, y in points:
        lowest[n] = min(y, lowest.get(n, np.inf))
    hull = _lower_hull(list(lowest.items()))
    if len(hull) == 1:
        slope, intercept = 0.0, -hull[0][1]
    else:
        (x1, y1), (x2, y2) = hull[-2], hull[-1]
        slope = (y2 - y1) / (x2 - x1)
        intercept = slope * x1 - y1
    return GapCertificate(
        slope=float(slope),
        intercept=float(intercept),
        min_normalized_gap=float(min(y / n for n, y in points)),
        points=points,
    )


# --------------------------------------------------------------- lifting


def pairing_matrix(samples: Sequence[BoundarySample]) -> np.ndarray:
    """``P[i, j] = eta_i(xi_j)`` for unit representatives."""
    xi = np.array([_unit(s.xi) for s in samples])
    eta = np.array([_unit(s.eta) for s in samples])
    return eta @ xi.T


def _drop_tangent_pairs(samples: list[BoundarySample], tol: float) -> list[BoundarySample]:
    p = np.abs(pairing_matrix(samples))
    bad = p <= tol
    np.fill_diagonal(bad, False)
    bad = bad | bad.T
    keep = np.ones(len(samples), dtype=bool)
    while True:
        counts = (bad & keep[None, :] & keep[:, None]).sum(axis=1)
        if counts.max(initial=0) == 0:
            break
        keep[int(np.argmax(counts))] = False
    dropped = int((~keep).sum())
    if dropped:
        log.warning("discarded %d samples with near-tangent pairings", dropped)
    return [s for s, k in zip(samples, keep) if k]


def lift_boundary(samples: Sequence[BoundarySample], lift_tol: float = LIFT_TOL) -> list[BoundarySample]:
    """Fix signs of xi and eta so that ``eta_i(xi_j) > 0`` for all i != j.

    The covectors are first oriented consistently (by their top singular
    direction), and their mean f chooses the sign of every xi. Each eta then
    takes the majority sign of its pairings with the lifted xi, and the full
    matrix is validated. Samples whose pairings vanish to within ``lift_tol``
    are discarded with a warning.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise BadInput("lifting needs at least two samples")
    samples = _drop_tangent_pairs(samples, lift_tol)
    if len(samples) < 2:
        raise LiftInconsistent("fewer than two transverse samples remain")
    xi = np.array([_unit(s.xi) for s in samples])
    eta = np.array([_unit(s.eta) for s in samples])

    ref = np.linalg.svd(eta, full_matrices=False)[2][0]
    eta = eta * np.where(eta @ ref >= 0, 1.0, -1.0)[:, None]
    f = eta.mean(axis=0)
    fx = xi @ f
    zero = np.flatnonzero(np.abs(fx) <= lift_tol * np.linalg.norm(f))
    if len(zero):
        i = int(zero[0])
        raise LiftInconsistent(f"mean functional vanishes on xi[{i}]", pair=(i, i))
    xi = xi * np.sign(fx)[:, None]

    p = eta @ xi.T
    np.fill_diagonal(p, 0.0)
    votes = np.sign(p).sum(axis=1)
    eta = eta * np.where(votes >= 0, 1.0, -1.0)[:, None]

    p = eta @ xi.T
    np.fill_diagonal(p, np.inf)
    if p.min() <= lift_tol:
        i, j = np.unravel_index(int(np.argmin(p)), p.shape)
        raise LiftInconsistent(
            f"eta[{i}](xi[{j}]) = {p[i, j]:.3e} after lifting", pair=(int(i), int(j))
        )
    return [
        BoundarySample(s.word, x, e, lifted=True) for s, x, e in zip(samples, xi, eta)
    ]


# ------------------------------------------------------- domain building


class Domain(NamedTuple):
    omega: ConvexBody
    hull: ConvexBody
    samples: list[BoundarySample]


def build_domain(samples: Sequence[BoundarySample], lift_tol: float = LIFT_TOL) -> Domain:
    """Outer domain ``{eta_i > 0}`` and inner hull ``conv(xi_i)`` of lifted samples.

    Unlifted input is lifted first, after a rank check on the covectors
    (which does not depend on signs). The lifted samples actually used are
    returned alongside the two bodies.
    """
    samples = list(samples)
    if not samples:
        raise EmptySamples("no samples")
    d = samples[0].dim
    eta = np.array([_unit(s.eta) for s in samples])
    if np.linalg.matrix_rank(eta, tol=1e-8) < d:
        raise ImproperBody("covectors do not span the dual space")
    if not all(s.lifted for s in samples):
        samples = lift_boundary(samples, lift_tol)
        eta = np.array([_unit(s.eta) for s in samples])
    xi = np.array([_unit(s.xi) for s in samples])
    omega = ConvexBody(hrep=eta, vrep=xi)
    if not omega.proper:
        raise ImproperBody("sampled domain is not properly convex")
    p = eta @ xi.T
    np.fill_diagonal(p, np.inf)
    if p.min() < -CONTAINMENT_TOL:
        raise ImproperBody("hull is not contained in the domain")
    hull = ConvexBody(vrep=xi, chart=omega.chart)
    return Domain(omega, hull, samples)


def domain_drift(coarse: Sequence[BoundarySample], fine: Sequence[BoundarySample]) -> float:
    """Largest projective angle from a fine-sample xi to the nearest coarse one."""
    a = np.array([_unit(s.xi) for s in coarse])
    b = np.array([_unit(s.xi) for s in fine])
    cos = np.clip(np.abs(b @ a.T).max(axis=1), 0.0, 1.0)
    return float(np.arccos(cos).max())


# ---------------------------------------------------- classification


@dataclass(frozen=True)
class PointClass:
    c1: bool
    extreme: bool
    support_count: int


def _distinct_rows(rows: np.ndarray, tol: float = DEDUP_TOL) -> int:
    kept: list[np.ndarray] = []
    for r in rows:
        if all(min(np.linalg.norm(r - k), np.linalg.norm(r + k)) > tol for k in kept):
            kept.append(r)
    return len(kept)


def classify_boundary_point(
    samples: Sequence[BoundarySample],
    i: int,
    *,
    support_tol: float = SUPPORT_TOL,
    hull_tol: float = HULL_TOL,
) -> PointClass:
    """Finite proxies for the C^1 and extreme-point properties of ``xi_i``.

    c1: exactly one sampled covector (up to scale) vanishes at ``xi_i``.
    extreme: ``xi_i`` is not a nonnegative combination of the other samples
    lying on its supporting hyperplane ``ker eta_i``. (Any combination of
    samples giving ``xi_i`` can only use those, since ``eta_i`` is
    nonnegative on all of them.)
    """
    if len(samples) < 3:
        raise BadInput("classification needs at least 3 samples")
    xi = np.array([_unit(s.xi) for s in samples])
    eta = np.array([_unit(s.eta) for s in samples])
    vanishing = np.abs(eta @ xi[i]) <= support_tol
    support = _distinct_rows(eta[vanishing])
    on_plane = np.abs(xi @ eta[i]) <= support_tol
    on_plane[i] = False
    others = xi[on_plane]
    extreme = True
    if len(others):
        extreme = hull_membership(others, xi[i], tol=hull_tol).status != "inside"
    return PointClass(c1=support == 1, extreme=extreme, support_count=support)


def invariant_sym_subspace(samples: Sequence[BoundarySample], rtol: float = 1e-8):
    """Dimension and orthonormal basis of ``span{xi xi^T}`` in Sym_d(R)."""
    if not samples:
        raise EmptySamples("no samples")
    coords = np.array([sym_coords(np.outer(_unit(s.xi), _unit(s.xi))) for s in samples])
    _, sv, vt = np.linalg.svd(coords, full_matrices=False)
    rank = int(np.sum(sv > rtol * sv[0]))
    return rank, [sym_matrix(v) for v in vt[:rank]]


# ------------------------------------------------- positive proximality


@dataclass(frozen=True)
class ProximalityVerdict:
    status: str  # "positively_proximal", "witness_negative" or "no_proximal_found"
    word: str | None = None
    checked: int = 0


def positively_proximal_scan(rep: Representation, radius: int) -> ProximalityVerdict:
    """Scan the ball for a proximal element with negative leading eigenvalue.

    Spectra are class functions, so each element is evaluated through the
    canonical word of its conjugacy class; a long conjugator would otherwise
    make the eigenvalue problem needlessly ill-conditioned.
    """
    if radius < 1:
        raise BadInput("radius must be at least 1")
    found = 0
    cache: dict = {}
    for w in ball(rep.rank, radius):
        if not w:
            continue
        key = cyclic_reduce(w).canonical
        if key not in cache:
            cache[key] = spectrum(*evaluate_pair(rep, key))
        s = cache[key]
        if not s.proximal:
            continue
        found += 1
        if s.top_sign < 0:
            return ProximalityVerdict("witness_negative", format_word(w), found)
    if not found:
        return ProximalityVerdict("no_proximal_found")
    return ProximalityVerdict("positively_proximal", None, found)


# ------------------------------------------------------------------ csv


def write_samples_csv(samples: Sequence[BoundarySample], path) -> None:
    d = samples[0].dim if samples else 0
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(
            ["word"] + [f"xi{k}" for k in range(d)] + [f"eta{k}" for k in range(d)] + ["lifted"]
        )
        for s in samples:
            wr.writerow(
                [s.word]
                + [format(x, ".17g") for x in s.xi]
                + [format(x, ".17g") for x in s.eta]
                + [int(s.lifted)]
            )


def read_samples_csv(path) -> list[BoundarySample]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    d = sum(1 for h in header if h.startswith("xi"))
    out = []
    for r in body:
        vals = np.array([float(x) for x in r[1 : 1 + 2 * d]])
        out.append(BoundarySample(r[0], vals[:d], vals[d:], bool(int(r[-1]))))
    return out


def conjugate_sample(sample: BoundarySample, g) -> BoundarySample:
    """Image ``(g xi, eta g^{-1})`` of a sample under a group element."""
    g = np.asarray(g, dtype=float)
    return replace(
        sample,
        xi=_unit(g @ sample.xi),
        eta=_unit(np.linalg.solve(g.T, sample.eta)),
    )


__all__ = [
    "BoundarySample",
    "ConjClass",
    "Domain",
    "GapCertificate",
    "PointClass",
    "ProximalityVerdict",
    "boundary_point",
    "build_domain",
    "classify_boundary_point",
    "conjugate_sample",
    "cyclic_reduce",
    "domain_drift",
    "gap_certificate",
    "invariant_sym_subspace",
    "lift_boundary",
    "pairing_matrix",
    "positively_proximal_scan",
    "read_samples_csv",
    "sample_boundary",
    "write_samples_csv",
]
