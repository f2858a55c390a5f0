"""Command-line front end: run named verification suites and print or write
deterministic JSON/CSV reports.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage error, 3 I/O
failure.
"""

from __future__ import annotations

import argparse
import sys

from .report import assemble_report, report_to_csv, report_to_json
from .suites import SUITES, SuiteConfig, explain, run_suite

SUITE_NAMES = sorted(SUITES) + ["all"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fraclab",
        description="Numerical cross-checks for explicit fractional-Laplacian "
                    "formulas: torsion profiles, antisymmetric barriers, "
                    "Poisson kernels, dimension lifts, and fractional "
                    "perimeters.")
    sub = ap.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a verification suite")
    runp.add_argument("suite", choices=SUITE_NAMES)
    runp.add_argument("--n", type=int, default=1, help="dimension (default 1)")
    runp.add_argument("--s", type=float, default=0.5,
                      help="fractional order in (0,1) (default 0.5)")
    runp.add_argument("--eps", type=str, default="0.02,0.01,0.005",
                      help="comma list of eps values for the ellipsoid family")
    runp.add_argument("--alpha", type=float, default=2.0,
                      help="boundary regularity exponent of the perturbed disk")
    runp.add_argument("--tol", type=float, default=None,
                      help="override tolerance where a suite honours it")
    runp.add_argument("--seed", type=int, default=42, help="master RNG seed")
    runp.add_argument("--samples", type=int, default=200_000,
                      help="Monte Carlo sample budget per randomized check")
    runp.add_argument("--out", type=str, default=None, help="output path")
    runp.add_argument("--format", choices=["json", "csv"], default="json")

    exp = sub.add_parser("explain", help="print the formula and tolerance "
                                         "rationale behind a check id")
    exp.add_argument("check_id")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    if args.command == "explain":
        try:
            text = explain(args.check_id)
        except KeyError:
            print(f"unknown check id: {args.check_id}", file=sys.stderr)
            return 2
        print(text)
        return 0

    try:
        eps_list = tuple(float(t) for t in args.eps.split(",") if t.strip())
    except ValueError:
        print(f"could not parse --eps {args.eps!r}", file=sys.stderr)
        return 2
    try:
        cfg = SuiteConfig(n=args.n, s=args.s, eps_list=eps_list,
                          alpha=args.alpha, tol=args.tol, seed=args.seed,
                          samples=args.samples)
        checks = run_suite(args.suite, cfg)
    except KeyError:
        print(f"unknown suite: {args.suite}", file=sys.stderr)
        return 2

    params = {
        "n": args.n, "s": args.s, "eps": list(eps_list), "alpha": args.alpha,
        "tol": args.tol, "seed": args.seed, "samples": args.samples,
    }
    report = assemble_report(args.suite, params, checks)
    payload = (report_to_json(report) if args.format == "json"
               else report_to_csv(report))

    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"could not write {args.out}: {exc}", file=sys.stderr)
            return 3
    else:
        sys.stdout.write(payload)

    n_fail = sum(1 for c in checks if not c.passed)
    summary = f"{len(checks)} checks, {n_fail} failed"
    print(summary, file=sys.stderr)
    return 0 if n_fail == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
