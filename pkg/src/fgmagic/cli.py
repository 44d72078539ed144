"""Command-line entry point.

Subcommands write CSV (default) or JSON to ``--output`` or stdout::

    fgmagic random-sre --L 8 --L 12 --alpha 1 --alpha 2 --realizations 20 --samples 2000 --seed 1
    fgmagic fixed-n --L 16 --N 4 --N 8 --alpha 2 --realizations 10 --samples 2000 --seed 1
    fgmagic kitaev2d --ell 4 --delta 0.1 --mu-grid 0 8 17 --alpha 1 --samples 2000 --seed 1
    fgmagic ipr-table --L 4 --N 2 --alpha 2
    fgmagic validate --max-modes 5 --seed 7

Exit status is 0 on success, 1 on a numerical failure and 2 on bad usage.
``FGMAGIC_WORKERS`` overrides the default worker count.
"""

import argparse
import contextlib
import io
import json
import sys

import numpy as np

from . import analytics, models
from .errors import InputError, InsufficientSamples, NumericalFailure
from .sampler import default_workers
from .validation import run_checks

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


def _common(p, stochastic=True):
    p.add_argument("--seed", type=int, required=stochastic, help="master seed (required)")
    p.add_argument("--workers", type=int, default=None, help="threads for sampling")
    p.add_argument("--output", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="fgmagic", description="Magic of fermionic Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("random-sre", help="filtered SREs of Haar-random Gaussian states")
    _common(p)
    p.add_argument("--L", type=int, action="append", required=True)
    p.add_argument("--alpha", type=float, action="append", required=True)
    p.add_argument("--realizations", type=int, default=10)
    p.add_argument("--samples", type=int, default=2000)

    p = sub.add_parser("fixed-n", help="filtered SREs of random Slater states with exact IPR columns")
    _common(p)
    p.add_argument("--L", type=int, action="append", required=True)
    p.add_argument("--N", type=float, action="append", required=True, help="particle number or filling in (0,1)")
    p.add_argument("--alpha", type=float, action="append", required=True)
    p.add_argument("--realizations", type=int, default=10)
    p.add_argument("--samples", type=int, default=2000)

    p = sub.add_parser("kitaev2d", help="SRE density of the 2D p+ip superconductor across mu")
    _common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--mu", type=float, action="append", help="chemical potential (repeatable)")
    p.add_argument("--mu-grid", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--alpha", type=float, action="append", required=True)
    p.add_argument("--samples", type=int, default=2000)

    p = sub.add_parser("ipr-table", help="exact ensemble-averaged IPR and PRE")
    _common(p, stochastic=False)
    p.add_argument("--L", type=int, action="append", required=True)
    p.add_argument("--N", type=float, action="append", required=True)
    p.add_argument("--alpha", type=int, action="append", required=True)

    p = sub.add_parser("validate", help="compare against the dense statevector oracle")
    _common(p)
    p.add_argument("--max-modes", type=int, default=5)
    p.add_argument("--states", type=int, default=3)
    return parser


def _kitaev_grid(args):
    mus = list(args.mu or [])
    if args.mu_grid:
        start, stop, count = args.mu_grid
        if count < 1 or count != int(count):
            raise InputError("--mu-grid COUNT must be a positive integer")
        mus.extend(np.linspace(start, stop, int(count)).tolist())
    if not mus:
        raise InputError("give --mu or --mu-grid")
    return [models.Kitaev2DParams(args.ell, args.t, mu, args.delta) for mu in mus]


def _fixed_n_rows(records):
    rows = []
    for r in records:
        row = dict(vars(r)) if not isinstance(r, dict) else dict(r)
        a = r.alpha
        if a == int(a):
            spec = analytics.EnsembleSpec(r.L_or_ell, r.N_or_blank, int(a))
            row["ipr_exact"] = analytics.avg_ipr_exact(spec)
            row["pre_annealed"] = analytics.annealed_pre(spec) if a >= 2 else ""
        else:
            row["ipr_exact"] = row["pre_annealed"] = ""
        rows.append(row)
    return rows


def _emit(args, text):
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)


def _render(args, records, extra=()):
    if args.format == "json":
        return models.records_to_json(records) + "\n"
    buf = io.StringIO()
    models.write_records_csv(records, buf, extra)
    return buf.getvalue()


def _render_ipr(args, rows):
    if args.format == "json":
        return json.dumps(rows) + "\n"
    buf = io.StringIO()
    analytics.write_ipr_csv(rows, buf)
    return buf.getvalue()


def _positive_fillings(values):
    for v in values:
        if v < 0 or (v >= 1 and v != int(v)):
            raise InputError("--N takes nonnegative integers or fillings in (0, 1)")
    return values


def run(args):
    """Execute parsed arguments; returns the exit status."""
    workers = args.workers if args.workers is not None else default_workers()
    if workers < 1:
        raise InputError("--workers must be >= 1")
    if args.command == "random-sre":
        recs = models.sweep_random(args.L, args.alpha, args.realizations, args.samples, args.seed, workers)
        _emit(args, _render(args, recs))
    elif args.command == "fixed-n":
        Ns = _positive_fillings(args.N)
        recs = models.sweep_fixed_n(args.L, Ns, args.alpha, args.realizations, args.samples, args.seed, workers)
        _emit(args, _render(args, _fixed_n_rows(recs), ("ipr_exact", "pre_annealed")))
    elif args.command == "kitaev2d":
        recs = models.sweep_kitaev(_kitaev_grid(args), args.alpha, args.samples, args.seed, workers)
        _emit(args, _render(args, recs))
    elif args.command == "ipr-table":
        rows = analytics.ipr_table(args.L, _positive_fillings(args.N), args.alpha)
        _emit(args, _render_ipr(args, rows))
    elif args.command == "validate":
        results = run_checks(args.max_modes, args.seed, args.states)
        lines = [f"{'check':<22}{'L':>3}  {'error':>10}  {'tol':>8}  result"]
        for r in results:
            lines.append(f"{r.name:<22}{r.L:>3}  {r.error:>10.2e}  {r.tol:>8.0e}  {'PASS' if r.passed else 'FAIL'}")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return run(args)
    except (InputError, InsufficientSamples) as e:
        print(f"fgmagic: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as e:
        where = ", ".join(
            f"{k}={v}" for k, v in (("module", e.module), ("seed", e.seed), ("step", e.step), ("sample", e.index))
            if v is not None
        )
        print(f"fgmagic: numerical failure ({where}): {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    with contextlib.suppress(BrokenPipeError):
        sys.exit(main())
