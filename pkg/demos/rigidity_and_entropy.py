"""Entropy and gap rigidity along the Fuchsian locus and off it.

For tau_d o rho the whole spectrum is a ladder lambda^{d-1}, ..., lambda^{1-d},
so every consecutive ratio equals lambda_1/lambda_2 and the Hilbert-length
counts are those of rho rescaled by d - 1. The cyclic groups generated by
the Sp(4) and G2 examples break the ladder, and the scan reports them.

    python demos/rigidity_and_entropy.py [--radius 8]
"""

import argparse
import math

import numpy as np

from projanosov.families import appendix_b, cyclic_rep, schottky_sl2, tau_rep
from projanosov.rigidity import entropy_estimate, entropy_scaling_check, rigidity_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--radius", type=int, default=8)
    args = ap.parse_args()

    base = schottky_sl2(3.0, np.pi / 4)
    for d in (3, 5):
        check = entropy_scaling_check(base, d, args.radius)
        print(f"d={d}: N_tau(r) == N_base(r/{d - 1}) on the grid: {check.match}")

    est = entropy_estimate(tau_rep(base, 3), args.radius)
    print(f"tau3 entropy slope {est.slope_estimate:.4f} (bound {est.bound})")

    for d in (3, 4, 5):
        scan = rigidity_scan(tau_rep(base, d), min(args.radius, 6))
        print(f"tau{d}: {scan.checked} classes, {len(scan.witnesses)} gap mismatches")

    for label, g in (("sp(16,2)", appendix_b("sp", [16, 2])), ("g2(2,.5)", appendix_b("g2", 2.0, 0.5))):
        for w in rigidity_scan(cyclic_rep(g), 1, symmetric=True).witnesses:
            print(
                f"{label}: lambda1/lambda2 = {w.top_ratio:.4f}, lambda2/lambda3 = {w.k_ratio:.4f}"
                f" (log difference {abs(math.log(w.top_ratio / w.k_ratio)):.3f})"
            )


if __name__ == "__main__":
    main()
