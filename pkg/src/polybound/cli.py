"""Command-line front end: ``polybound {profile,bounds,verify,fit}``.

Exit codes: 0 success; 1 failed check or diverging fit; 2 usage or schema
error; 3 a variable law without a boundedness parameter and no override;
4 an empirical tail exceeds its bound.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bounds import BoundConstants, ConstantFitError, TailBoundReport, load_constants
from .montecarlo import DEFAULT_SEED, compare, default_workers
from .problem import ProblemError, load_problem
from .smoothness import UnsupportedDistributionError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_VIOLATION = 4

DEFAULT_SAMPLES = 100_000


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        return load_problem(path)
    except ProblemError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _profile(spec):
    try:
        return spec.profile()
    except UnsupportedDistributionError as exc:
        raise CliError(f"{spec.source}: {exc}", EXIT_UNSUPPORTED) from None


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"--lambda-grid: cannot parse {text!r}", EXIT_USAGE) from None
    if not grid:
        raise CliError("--lambda-grid: empty", EXIT_USAGE)
    if any(x < 0 for x in grid) or any(a >= b for a, b in zip(grid, grid[1:])):
        raise CliError("--lambda-grid: values must be nonnegative and strictly increasing", EXIT_USAGE)
    return grid


def _constants(flag: Optional[str], spec) -> BoundConstants:
    path = flag
    if path is None and spec.constants is not None:
        path = spec.constants
        if spec.source and not Path(path).is_absolute():
            path = str(Path(spec.source).parent / path)
    try:
        return load_constants(path)
    except (OSError, ValueError, TypeError) as exc:
        raise CliError(f"constants: {exc}", EXIT_USAGE) from None


# ---------------------------------------------------------------------------


def cmd_profile(args) -> int:
    spec = _load(args.problem)
    prof = _profile(spec)
    json.dump(prof.to_dict(), sys.stdout)
    sys.stdout.write("\n")
    return EXIT_OK


def write_csv(rows: Sequence[TailBoundReport], empirical: bool, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TailBoundReport.csv_header(empirical))
    for row in rows:
        writer.writerow(row.csv_row(empirical))


def cmd_bounds(args) -> int:
    spec = _load(args.problem)
    prof = _profile(spec)
    constants = _constants(args.constants, spec)
    lams = _parse_grid(args.lambda_grid) if args.lambda_grid else spec.lambdas(prof)
    samples = args.samples if args.samples is not None else (spec.samples if spec.samples is not None else DEFAULT_SAMPLES)
    seed = args.seed if args.seed is not None else (spec.seed if spec.seed is not None else DEFAULT_SEED)
    if samples < 0:
        raise CliError("--samples must be >= 0", EXIT_USAGE)
    workers = args.workers or default_workers()
    rows = compare(spec.polynomial, spec.variables, lams, constants, samples,
                   seed=seed, workers=workers, profile=prof)
    empirical = samples > 0
    if args.format == "json":
        out = {
            "problem": spec.name or spec.source,
            "profile": prof.to_dict(),
            "constants": {k: getattr(constants, k) for k in ("R", "R4", "R0", "R_hc")},
            "samples": samples,
            "seed": seed,
            "rows": [r.to_dict() for r in rows],
        }
        json.dump(out, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        write_csv(rows, empirical, sys.stdout)
    flagged = [r.lam for r in rows if r.violation]
    if flagged:
        print(f"soundness violation at lambda = {', '.join(repr(x) for x in flagged)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import format_results, run_suite

    constants = load_constants(args.constants)
    results = run_suite(args.suite, seed=args.seed, constants=constants)
    print(format_results(results, verbose=args.verbose))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


FIT_KINDS = ("R", "R4", "R0", "R_hc", "all")


def cmd_fit(args) -> int:
    from .corpus import FIT_SAMPLES, FIT_SEED, fit_manifest, load_corpus, write_manifest

    directory = Path(args.corpus_dir)
    if not directory.is_dir():
        raise CliError(f"{directory}: not a directory", EXIT_USAGE)
    try:
        problems = load_corpus(directory)
    except ProblemError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if not problems:
        raise CliError(f"{directory}: no problem files (*.json)", EXIT_USAGE)
    kinds = ("R", "R4", "R0", "R_hc") if args.kind == "all" else (args.kind,)
    out_path = Path(args.output) if args.output else None
    if out_path is not None and out_path.exists():
        base = load_constants(str(out_path))
    else:
        base = load_constants(args.constants)
    try:
        manifest = fit_manifest(
            directory, kinds, base=base,
            samples=args.samples if args.samples is not None else FIT_SAMPLES,
            seed=args.seed if args.seed is not None else FIT_SEED,
            workers=args.workers or default_workers(),
        )
    except ConstantFitError as exc:
        print(f"fit diverged: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except UnsupportedDistributionError as exc:
        raise CliError(str(exc), EXIT_UNSUPPORTED) from None
    if out_path is None:
        json.dump(manifest, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        changed = write_manifest(manifest, out_path)
        print(f"{out_path}: {'updated' if changed else 'unchanged'}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .verify import DEFAULT_SEED as VERIFY_SEED, SUITES

    parser = argparse.ArgumentParser(prog="polybound", description="Tail bounds for multilinear polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="print mu_0..mu_q, L, mean and variance as JSON")
    p.add_argument("problem")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("bounds", help="bound table with Monte Carlo comparison")
    p.add_argument("problem")
    p.add_argument("--lambda-grid", help="comma-separated, strictly increasing deviation levels")
    p.add_argument("--samples", type=int, help=f"Monte Carlo draws (default {DEFAULT_SAMPLES}; 0 skips)")
    p.add_argument("--seed", type=int, help=f"default {DEFAULT_SEED}")
    p.add_argument("--constants", help="constants manifest (falls back to $POLYBOUND_CONSTANTS)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, help="worker processes (default: all CPUs)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run property suites against the exact oracles")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=int, default=VERIFY_SEED)
    p.add_argument("--constants")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="fit bound constants on a corpus of problem files")
    p.add_argument("corpus_dir")
    p.add_argument("kind", choices=FIT_KINDS)
    p.add_argument("--output", help="manifest to update (printed to stdout when omitted)")
    p.add_argument("--constants", help="manifest supplying constants that are not refitted")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"polybound: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
