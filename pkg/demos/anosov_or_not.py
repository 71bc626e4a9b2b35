"""Three free-group representations, three behaviours of the eigenvalue gap.

* tau_3 o Schottky: log(lambda_1/lambda_2) grows linearly in word length
  (projective Anosov).
* The reducible example (a Schottky group acting on a plane, trivially on a
  complementary line): still a linear gap, but the limit set lies in a
  projective line, so the sampled body has empty interior.
* The block-double example diag(phi, phi): every element has a repeated top
  eigenvalue, the gap is identically zero, so it is not projective Anosov.

    python demos/anosov_or_not.py [--radius 8]
"""

import argparse

import numpy as np

from projanosov.anosov import build_domain, gap_certificate, sample_boundary
from projanosov.errors import ProjAnosovError
from projanosov.families import example_block_double, example_reducible, schottky_sl2, tau_rep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--radius", type=int, default=8)
    args = ap.parse_args()

    base = schottky_sl2(3.0, np.pi / 4)
    reps = {
        "tau3": tau_rep(base, 3),
        "reducible": example_reducible(),
        "block-double": example_block_double(),
    }
    print(f"{'rep':14s}{'slope':>10s}{'min gap/len':>14s}  domain")
    for name, rep in reps.items():
        cert = gap_certificate(rep, args.radius)
        try:
            build_domain(sample_boundary(rep, min(args.radius, 6)))
            domain = "properly convex"
        except ProjAnosovError as exc:
            domain = type(exc).__name__
        print(f"{name:14s}{cert.slope:10.4f}{cert.min_normalized_gap:14.4f}  {domain}")


if __name__ == "__main__":
    main()
