"""Command-line entry point ``projanosov``.

Exit codes: 0 success, 1 other error, 2 bad input or parse error, 3
eigenvalue failure, 4 enumeration budget exceeded, 5 improper domain or
inconsistent lift (a JSON diagnostic is written next to ``--out``), 6
unsupported dimension for rendering.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import anosov, families, rigidity
from .errors import (
    BadInput,
    BudgetExceeded,
    EigenFailure,
    ImproperBody,
    LiftInconsistent,
    ProjAnosovError,
)
from .hilbert import ConvexBody
from .projlin import spectrum
from .svg import LAYERS, RenderSpec, UnsupportedDimension, render_svg
from .wordgroup import Representation, evaluate_pair, format_word, parse_word

EXIT_INPUT = 2
EXIT_EIGEN = 3
EXIT_BUDGET = 4
EXIT_DOMAIN = 5
EXIT_DIMENSION = 6


def fmt(x) -> str:
    return format(float(x), ".17g")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise BadInput(f"expected comma-separated numbers, got {text!r}") from exc


class _Output:
    """Write to --out when given, else stdout."""

    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def _load_rep(args) -> Representation:
    if not args.rep:
        raise BadInput("--rep FILE is required")
    try:
        return Representation.load(args.rep)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise BadInput(f"cannot read representation file: {exc}") from exc


def _workers(args) -> int:
    return args.workers if args.workers else (os.cpu_count() or 1)


# ----------------------------------------------------------- subcommands


def cmd_spectrum(args) -> int:
    rep = _load_rep(args)
    w = parse_word(args.word, rep.rank)
    s = spectrum(*evaluate_pair(rep, w))
    d = rep.dim
    header = (
        ["word"]
        + [f"lambda_{i + 1}" for i in range(d)]
        + [f"gap_{i + 1}" for i in range(d - 1)]
        + ["proximal", "biproximal", "top_sign"]
    )
    row = (
        [format_word(w)]
        + [fmt(x) for x in s.moduli]
        + [fmt(x) for x in s.gaps]
        + [str(s.proximal).lower(), str(s.biproximal).lower(), str(s.top_sign)]
    )
    with _Output(args.out) as fh:
        print(",".join(header), file=fh)
        print(",".join(row), file=fh)
    return 0


def cmd_gap(args) -> int:
    rep = _load_rep(args)
    cert = anosov.gap_certificate(rep, args.radius, workers=_workers(args))
    summary = {
        "radius": args.radius,
        "slope": float(cert.slope),
        "intercept": float(cert.intercept),
        "min_normalized_gap": float(cert.min_normalized_gap),
        "classes": len(cert.points),
    }
    print(json.dumps(summary, sort_keys=True))
    if args.out:
        with open(args.out, "w") as fh:
            print("length,log_gap", file=fh)
            for n, y in cert.points:
                print(f"{n},{fmt(y)}", file=fh)
    return 0


def cmd_entropy(args) -> int:
    if args.check_scaling:
        base = _load_rep(args) if args.rep else families.schottky_sl2(3.0, np.pi / 4)
        chk = rigidity.entropy_scaling_check(base, args.d, args.radius)
        print(f"counts-match: {str(chk.match).lower()}")
        with _Output(args.out) as fh:
            print("threshold,count,base_count", file=fh)
            for r, a, b in zip(chk.thresholds, chk.counts, chk.base_counts):
                print(f"{fmt(r)},{a},{b}", file=fh)
        return 0
    rep = _load_rep(args)
    grid = None
    if args.grid:
        lo, hi, n = args.grid.split(":")
        grid = np.linspace(float(lo), float(hi), int(n))
    rep_ = rigidity.entropy_estimate(rep, args.radius, grid, workers=_workers(args))
    print(
        json.dumps(
            {
                "slope_estimate": rep_.slope_estimate,
                "bound": rep_.bound,
                "complete_below": rep_.complete_below,
                "grid_sensitivity": rep_.grid_sensitivity,
            },
            sort_keys=True,
        )
    )
    with _Output(args.out) as fh:
        print("threshold,count", file=fh)
        for r, c in rep_.rows():
            print(f"{fmt(r)},{c}", file=fh)
    return 0


def _family_rep(args) -> Representation:
    fam = args.family
    if fam == "sp":
        return families.cyclic_rep(families.sp_element(_floats(args.sigma)), "sp")
    if fam == "so":
        return families.cyclic_rep(families.so_element(_floats(args.sigma)), "so")
    if fam == "g2":
        return families.cyclic_rep(families.g2_element(args.t, args.s), "g2")
    raise BadInput(f"unknown family {fam!r}")


def cmd_scan(args) -> int:
    if args.family:
        # a single generator: one class up to inversion
        rep, radius, symmetric = _family_rep(args), 1, True
    else:
        rep, radius, symmetric = _load_rep(args), args.radius, False
    if args.proximal:
        v = anosov.positively_proximal_scan(rep, radius)
        print(json.dumps({"verdict": v.status, "word": v.word, "proximal_elements": v.checked}))
        return 0
    tol = 1e-6 if args.tol is None else args.tol
    res = rigidity.rigidity_scan(
        rep, radius, args.k, tol=tol, symmetric=symmetric, workers=_workers(args)
    )
    with _Output(args.out) as fh:
        print("word,ratio_1,ratio_k", file=fh)
        for w in res.witnesses:
            print(f"{w.word},{_short(w.top_ratio)},{_short(w.k_ratio)}", file=fh)
    print(f"witnesses: {len(res.witnesses)} max-mismatch: {fmt(res.max_mismatch)}", file=sys.stderr)
    return 0


def _short(x: float) -> str:
    # ratios are printed at 12 significant digits so exact ladders read exactly
    return format(float(x), ".12g")


def _diagnostic(args, exc) -> None:
    path = (args.out or "domain") + ".diagnostic.json"
    info = {"error": type(exc).__name__, "reason": str(exc)}
    if getattr(exc, "pair", None) is not None:
        info["pair"] = list(exc.pair)
    with open(path, "w") as fh:
        json.dump(info, fh, sort_keys=True)


def cmd_domain(args) -> int:
    rep = _load_rep(args)
    w = _workers(args)
    try:
        samples = anosov.sample_boundary(rep, args.radius, args.min_len, workers=w)
        coarse = (
            anosov.sample_boundary(rep, args.radius - 1, args.min_len, workers=w)
            if args.radius - 1 >= args.min_len
            else samples
        )
        dom = anosov.build_domain(samples, lift_tol=args.lift_tol)
    except (ImproperBody, LiftInconsistent) as exc:
        _diagnostic(args, exc)
        raise
    lifted = dom.samples
    out = args.out or "domain.json"
    stem = out[:-5] if out.endswith(".json") else out
    data = {"omega": dom.omega.to_json(), "hull": dom.hull.to_json()}
    with open(out, "w") as fh:
        json.dump(data, fh)
    anosov.write_samples_csv(lifted, stem + ".samples.csv")
    print(
        json.dumps(
            {
                "samples": len(lifted),
                "proper": bool(dom.omega.proper),
                "drift": anosov.domain_drift(coarse, samples),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_families(args) -> int:
    fam = args.family
    if fam == "schottky":
        rep = families.schottky_sl2(args.mu, args.theta)
    elif fam == "tau":
        rep = families.tau_rep(families.schottky_sl2(args.mu, args.theta), args.d)
    elif fam == "sym2":
        rep = families.sym_square_rep(families.schottky_sl2(args.mu, args.theta))
    elif fam == "reducible":
        rep = families.example_reducible(args.mu, args.theta)
    elif fam == "block-double":
        rep = families.example_block_double(
            families.sym_square_rep(families.schottky_sl2(args.mu, args.theta))
        )
    else:
        rep = _family_rep(args)
    text = json.dumps(rep.to_json())
    with _Output(args.out) as fh:
        print(text, file=fh)
    return 0


def cmd_render(args) -> int:
    samples = anosov.read_samples_csv(args.samples) if args.samples else []
    omega = None
    if args.domain:
        with open(args.domain) as fh:
            data = json.load(fh)
        omega = ConvexBody.from_json(data.get("omega", data))
    layers = args.layers.split(",") if args.layers else LAYERS
    sl = np.array(_floats(args.slice)).reshape(-1, 3) if args.slice else None
    spec = RenderSpec(args.width, args.height, layers, slice=sl)
    svg = render_svg(samples, omega, spec)
    with _Output(args.out) as fh:
        fh.write(svg)
    return 0


def cmd_verify_g2(args) -> int:
    if args.matrix:
        with open(args.matrix) as fh:
            m = np.array(json.load(fh), dtype=float)
    else:
        m = families.g2_element(args.t, args.s, as_printed=args.as_printed)
    tol = 1e-8 if args.tol is None else args.tol
    print(str(families.verify_g2(m, tol=tol)).lower())
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rep", metavar="FILE", help="representation JSON file")
    common.add_argument("--radius", type=int, default=6, help="word-length radius")
    common.add_argument(
        "--tol", type=float, default=None, help="comparison tolerance (scan: 1e-6, verify-g2: 1e-8)"
    )
    common.add_argument("--workers", type=int, default=0, help="worker processes (0 = all cores)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="projanosov", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser(
        "spectrum",
        parents=[common],
        help="eigenvalue moduli of one word",
        description="CSV columns: word, lambda_1..lambda_d, gap_1..gap_{d-1}, "
        "proximal, biproximal, top_sign.",
    )
    s.add_argument("--word", default="", help='word such as "aBab" (capitals are inverses)')
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser(
        "gap",
        parents=[common],
        help="gap certificate",
        description="Prints a JSON summary; --out gets CSV columns length, log_gap.",
    )
    s.set_defaults(func=cmd_gap)

    s = sub.add_parser(
        "entropy",
        parents=[common],
        help="conjugacy-class entropy counts",
        description="Prints a JSON summary; CSV columns threshold, count "
        "(threshold, count, base_count with --check-scaling).",
    )
    s.add_argument("--grid", help="thresholds LO:HI:N")
    s.add_argument("--check-scaling", action="store_true", help="compare tau_d counts with the base")
    s.add_argument("--d", type=int, default=3, help="tau_d dimension for --check-scaling")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser(
        "scan",
        parents=[common],
        help="gap-rigidity or positive-proximality scan",
        description="CSV columns: word, ratio_1 (lambda_1/lambda_2), "
        "ratio_k (lambda_{k+1}/lambda_{k+2}); one row per witness.",
    )
    s.add_argument("--family", choices=["sp", "so", "g2"], help="scan a single explicit element")
    s.add_argument("--sigma", default="16,2")
    s.add_argument("--t", type=float, default=2.0)
    s.add_argument("--s", type=float, default=0.5)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--proximal", action="store_true", help="positive-proximality scan instead")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser(
        "domain",
        parents=[common],
        help="sample, lift and build the invariant domain",
        description="Writes omega/hull ConvexBody JSON to --out and lifted samples "
        "(CSV: word, xi0.., eta0.., lifted) next to it.",
    )
    s.add_argument("--min-len", type=int, default=1)
    s.add_argument("--lift-tol", type=float, default=anosov.LIFT_TOL)
    s.set_defaults(func=cmd_domain)

    s = sub.add_parser("families", parents=[common], help="write a representation JSON file")
    s.add_argument(
        "--family",
        required=True,
        choices=["schottky", "tau", "sym2", "reducible", "block-double", "sp", "so", "g2"],
    )
    s.add_argument("--mu", type=float, default=3.0)
    s.add_argument("--theta", type=float, default=np.pi / 4)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--sigma", default="16,2")
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--s", type=float, default=0.5)
    s.set_defaults(func=cmd_families)

    s = sub.add_parser("render", parents=[common], help="SVG of samples and domain")
    s.add_argument("--samples", help="samples CSV")
    s.add_argument("--domain", help="domain JSON")
    s.add_argument("--width", type=int, default=512)
    s.add_argument("--height", type=int, default=512)
    s.add_argument("--layers", help="comma-separated subset of " + ",".join(LAYERS))
    s.add_argument("--slice", help="d x 3 slice matrix, row-major, comma-separated")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("verify-g2", parents=[common], help="check a 7x7 matrix is in G2")
    s.add_argument("--matrix", help="JSON 7x7 matrix (default: the hyperbolic element)")
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--s", type=float, default=0.5)
    s.add_argument("--as-printed", action="store_true")
    s.set_defaults(func=cmd_verify_g2, tol=1e-8)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EigenFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EIGEN
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ImproperBody, LiftInconsistent) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ProjAnosovError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
