"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (the lines are repeated in the terminal summary) or
directly with ``python tests/test_acceptance.py``.
"""

import math
import sys

import numpy as np
import pytest

from projanosov.anosov import (
    BoundarySample,
    build_domain,
    classify_boundary_point,
    gap_certificate,
    lift_boundary,
    pairing_matrix,
    positively_proximal_scan,
    sample_boundary,
)
from projanosov.errors import ImproperBody, LiftInconsistent
from projanosov.families import (
    appendix_b,
    cyclic_rep,
    example_block_double,
    example_reducible,
    schottky_sl2,
    sym_square_rep,
    tau_d,
    tau_rep,
    verify_g2,
)
from projanosov.hilbert import hilbert_distance, klein_disk, pairwise_distances, psd_cone, translation_length
from projanosov.projlin import spectrum
from projanosov.rigidity import entropy_estimate, entropy_scaling_check, hitchin_xi2_gap, rigidity_scan
from projanosov.wordgroup import class_spectra, conjugacy_classes, evaluate, format_word

RESULTS: dict[int, str] = {}

SCHOTTKY = schottky_sl2(3.0, np.pi / 4)
SCHOTTKY_NEG = schottky_sl2(3.0, np.pi / 4, signs=(-1, 1))


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def c1_ladder():
    worst = 0.0
    for d in (3, 4, 5, 7):
        mods = spectrum(tau_d(np.diag([2.0, 0.5]), d)).moduli
        want = 2.0 ** np.arange(d - 1, -d, -2)
        worst = max(worst, float(np.abs(mods - want).max()))
    return worst <= 1e-9, f"tau_d ladder for d in 3,4,5,7, max error {worst:.2e} (tol 1e-9)"


def c2_g2():
    grid = np.linspace(-1.0, 1.0, 5)
    verified, worst = 0, 0.0
    for t in grid:
        for s in grid:
            m = appendix_b("g2", t, s)
            verified += verify_g2(m)
            want = np.sort(np.exp([t, -t, s, -s, s + t, -(s + t), 0.0]))[::-1]
            worst = max(worst, float(np.abs(spectrum(m).moduli - want).max()))
    ok = verified == 25 and worst <= 1e-9
    return ok, f"G2 grid 5x5: {verified}/25 verified, moduli error {worst:.2e} (tol 1e-9)"


def _artanh_closed_form(p, q):
    x, y = p[:2] / p[2], q[:2] / q[2]
    num = (1 - x @ x) * (1 - y @ y)
    return math.atanh(math.sqrt(max(0.0, 1 - num / (1 - x @ y) ** 2)))


def c3_hilbert():
    rng = np.random.default_rng(3)
    body = klein_disk()

    def points(n):
        r = 0.95 * np.sqrt(rng.uniform(0, 1, n))
        t = rng.uniform(0, 2 * np.pi, n)
        return np.column_stack([r * np.cos(t), r * np.sin(t), np.ones(n)])

    pts = points(200)
    err = max(abs(hilbert_distance(body, p, q) - _artanh_closed_form(p, q)) for p, q in zip(pts[:100], pts[100:]))
    cloud = points(60)
    dist = pairwise_distances(body, cloud)
    bad = 0
    for _ in range(500):
        i, j, k = rng.choice(len(cloud), 3, replace=False)
        bad += not (
            dist[i, k] <= dist[i, j] + dist[j, k] + 1e-9
            and dist[i, j] == dist[j, i]
            and dist[i, j] > 0
            and dist[i, i] == 0
        )
    ok = err <= 1e-12 and bad == 0
    return ok, f"Klein artanh max error {err:.2e} (tol 1e-12); axiom violations {bad}/500"


def c4_translation():
    rep = sym_square_rep(SCHOTTKY)
    vrep = np.array([s.xi for s in lift_boundary(sample_boundary(rep, 4))])
    # the lifted samples are rank-one forms; orient them into the closed cone
    body = psd_cone(2)
    vrep = np.array([v if body.in_closure(v) else -v for v in vrep])
    body = psd_cone(2, vrep=vrep)
    checked, axis_err, undercut = 0, 0.0, 0.0
    for cls, s in class_spectra(rep, 4):
        if not s.biproximal:
            continue
        tl = translation_length(body, evaluate(rep, cls.canonical), orbit_samples=128)
        axis_err = max(axis_err, abs(tl.axis_value - s.half_log_spread()) if tl.axis_value is not None else math.inf)
        undercut = max(undercut, s.half_log_spread() - tl.sampled_min)
        checked += 1
        if checked == 20:
            break
    ok = checked == 20 and axis_err <= 1e-6 and undercut <= 1e-6
    return ok, f"{checked} sym2 elements: axis error {axis_err:.2e} (tol 1e-6), worst undercut {undercut:.2e}"


def c5_gaps():
    flat = gap_certificate(example_block_double(), 8).slope
    red = gap_certificate(example_reducible(), 8).slope
    tau3 = gap_certificate(tau_rep(SCHOTTKY, 3), 8).slope
    ok = abs(flat) <= 1e-9 and red >= 0.3 and tau3 >= 0.3
    return ok, f"radius 8 slopes: block-double {flat:.3g}, reducible {red:.4f}, tau3 {tau3:.4f} (need 0, >=0.3, >=0.3)"


def c6_proximal():
    verdicts = {d: positively_proximal_scan(tau_rep(SCHOTTKY, d), 6).status for d in (3, 5, 7)}
    neg = positively_proximal_scan(tau_rep(SCHOTTKY_NEG, 4), 6)
    ok = all(v == "positively_proximal" for v in verdicts.values()) and neg.status == "witness_negative"
    return ok, f"radius 6 verdicts {verdicts}; d=4 negative control {neg.status} at word {neg.word!r}"


def c7_domain():
    dom = build_domain(sample_boundary(tau_rep(SCHOTTKY, 3), 8))
    # u^2 + w^2 and u^2 - w^2 in the basis (u^2, uw, w^2)
    accepts = dom.omega.contains([1.0, 0.0, 1.0])
    rejects = not dom.omega.contains([1.0, 0.0, -1.0])
    try:
        build_domain(sample_boundary(example_reducible(), 8))
        improper = False
    except ImproperBody:
        improper = True
    ok = dom.omega.proper and accepts and rejects and improper
    return ok, (
        f"tau3 radius 8 ({len(dom.samples)} samples): proper={dom.omega.proper}, "
        f"accepts u2+w2={accepts}, rejects u2-w2={rejects}; reducible ImproperBody={improper}"
    )


def c8_lifting():
    p = pairing_matrix(lift_boundary(sample_boundary(tau_rep(SCHOTTKY, 3), 6)))
    off = float(p[~np.eye(len(p), dtype=bool)].min())
    try:
        lift_boundary(sample_boundary(tau_rep(SCHOTTKY_NEG, 4), 5))
        inconsistent = False
    except LiftInconsistent:
        inconsistent = True
    ok = off > 0 and inconsistent
    return ok, f"tau3 min off-diagonal pairing {off:.3e} (> 0); d=4 LiftInconsistent={inconsistent}"


def c9_entropy():
    checks = {d: entropy_scaling_check(SCHOTTKY, d, 8) for d in (3, 5)}
    est = entropy_estimate(tau_rep(SCHOTTKY, 3), 8)
    ok = all(c.match for c in checks.values()) and est.slope_estimate <= est.bound - 0.2
    counts = {d: int(c.counts[-1]) for d, c in checks.items()}
    return ok, (
        f"count identity d=3,5: {[c.match for c in checks.values()]} (top counts {counts}); "
        f"tau3 slope {est.slope_estimate:.4f} <= {est.bound} - 0.2"
    )


def c10_rigidity():
    fuchsian = {d: len(rigidity_scan(tau_rep(SCHOTTKY, d), 6).witnesses) for d in (3, 4, 5)}
    sp = rigidity_scan(cyclic_rep(appendix_b("sp", [16, 2])), 1, symmetric=True).witnesses
    g2 = rigidity_scan(cyclic_rep(appendix_b("g2", 2.0, 0.5)), 1, symmetric=True).witnesses
    sp_ok = len(sp) == 1 and np.allclose([sp[0].top_ratio, sp[0].k_ratio], [8, 4])
    g2_ok = len(g2) == 1 and np.allclose([g2[0].top_ratio, g2[0].k_ratio], np.exp([0.5, 1.5]))
    ok = all(n == 0 for n in fuchsian.values()) and sp_ok and g2_ok
    return ok, f"radius 6 witnesses {fuchsian}; sp 8 vs 4: {sp_ok}; g2 e^0.5 vs e^1.5: {g2_ok}"


def c11_rates():
    rep = tau_rep(SCHOTTKY, 3)
    words = [format_word(c.canonical) for c in conjugacy_classes(2, 3, min_len=1)][:10]
    worst = max(max(hitchin_xi2_gap(rep, w).relative_errors()) for w in words)
    return worst <= 0.02, f"{len(words)} words up to length 3, worst relative rate error {worst:.2e} (tol 2%)"


def c12_classification():
    lifted = lift_boundary(sample_boundary(tau_rep(SCHOTTKY, 3), 4))
    classes = [classify_boundary_point(lifted, i) for i in range(len(lifted))]
    good = sum(c.c1 and c.extreme for c in classes)
    segment = [
        BoundarySample("0", np.array([-1.0, 0.0, 1.0]), np.array([1.0, 0.0, 1.0]), True),
        BoundarySample("1", np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]), True),
        BoundarySample("2", np.array([1.0, 0.0, 1.0]), np.array([-1.0, 0.0, 1.0]), True),
    ]
    corner = [
        BoundarySample("c", np.array([1.0, 1.0, 1.0]), np.array([-1.0, 0.0, 1.0]), True),
        BoundarySample("x", np.array([1.0, -1.0, 1.0]), np.array([-1.0, 0.0, 1.0]), True),
        BoundarySample("y", np.array([-1.0, 1.0, 1.0]), np.array([0.0, -1.0, 1.0]), True),
        BoundarySample("o", np.array([-1.0, -1.0, 1.0]), np.array([1.0, 1.0, 2.0]), True),
    ]
    seg_extreme = classify_boundary_point(segment, 1).extreme
    corner_c1 = classify_boundary_point(corner, 0).c1
    ok = good == len(classes) and not seg_extreme and not corner_c1
    return ok, (
        f"tau3 radius 4: {good}/{len(classes)} samples c1 and extreme; "
        f"segment midpoint extreme={seg_extreme}; square corner c1={corner_c1}"
    )


CRITERIA = [
    c1_ladder,
    c2_g2,
    c3_hilbert,
    c4_translation,
    c5_gaps,
    c6_proximal,
    c7_domain,
    c8_lifting,
    c9_entropy,
    c10_rigidity,
    c11_rates,
    c12_classification,
]


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n):
    report(n, *CRITERIA[n - 1]())


if __name__ == "__main__":
    failed = 0
    for i, check in enumerate(CRITERIA, 1):
        try:
            report(i, *check())
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
