"""Build the invariant convex domain of tau_3 of a Schottky group and draw it.

The limit set of tau_3 o rho lies on the Veronese conic of squares
(a u + b w)^2. Lifting the boundary maps to a positive cone gives a
properly convex domain Omega, cut out by the sampled tangent lines. Its
Hilbert metric is compared with that of the cone of positive forms, which
Omega circumscribes.

    python demos/veronese_domain.py [--out veronese.svg] [--radius 6]
"""

import argparse

import numpy as np

from projanosov.anosov import build_domain, sample_boundary
from projanosov.families import schottky_sl2, tau_rep
from projanosov.hilbert import hilbert_distance, veronese_cone
from projanosov.svg import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="veronese.svg")
    ap.add_argument("--radius", type=int, default=6)
    args = ap.parse_args()

    rep = tau_rep(schottky_sl2(3.0, np.pi / 4), 3)
    samples = sample_boundary(rep, args.radius)
    dom = build_domain(samples)
    print(f"{len(samples)} boundary samples, {len(dom.samples)} kept after lifting")
    print(f"domain proper: {dom.omega.proper}")

    # u^2 + w^2 is positive definite (inside); u^2 - w^2 is indefinite (outside)
    for label, form in (("u^2 + w^2", [1.0, 0.0, 1.0]), ("u^2 - w^2", [1.0, 0.0, -1.0])):
        print(f"  {label:10s} inside Omega: {dom.omega.contains(form)}")

    # Omega contains the cone of positive forms, so its Hilbert metric is smaller
    cone = veronese_cone()
    p, q = np.array([1.0, 0.0, 1.0]), np.array([1.0, 0.3, 0.6])
    print(f"H_Omega(p, q) = {hilbert_distance(dom.omega, p, q):.6f}")
    print(f"H_cone(p, q)  = {hilbert_distance(cone, p, q):.6f}")

    with open(args.out, "w") as fh:
        fh.write(render_svg(dom.samples, dom.omega))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
