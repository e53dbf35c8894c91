"""Command-line interface.

Exit codes: 0 success, 1 numerical or acceptance failure, 2 usage error.
Tabular output is CSV with a header row and 17 significant digits, or JSON
with ``--format json``. ``--output`` writes to a file; a relative path is
resolved against ``$WEIBULL_BENFORD_OUTPUT_DIR`` when that is set.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import metrics, montecarlo, series
from .core_math import benford_digit_probabilities
from .errors import ConvergenceError, DomainError, PreconditionError
from .weibull import WeibullParams

OUTPUT_DIR_ENV = "WEIBULL_BENFORD_OUTPUT_DIR"
DEFAULT_MIN_GAMMA = 0.05
ABSOLUTE_MIN_GAMMA = 1e-3


class UsageError(Exception):
    pass


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _params(args):
    return WeibullParams(args.alpha, args.gamma)


def cmd_density(args):
    p = _params(args)
    z = series.z_grid(args.grid_size)
    plan = None
    cols = {"z": z}
    if args.method in ("series", "both"):
        trace = series.density_trace(p, args.base, args.epsilon, args.grid_size, "series")
        plan = trace.plan
        cols["f_prime"] = trace.values
    if args.method in ("direct", "both"):
        direct = series.density_trace(p, args.base, grid_size=args.grid_size, method="direct").values
        cols["f_prime_direct" if args.method == "both" else "f_prime"] = direct
    summary = {}
    if args.method == "both":
        cols["abs_diff"] = np.abs(cols["f_prime"] - cols["f_prime_direct"])
        summary = {"max_abs_diff": float(np.max(cols["abs_diff"])), "plan": plan.as_dict()}

    if args.format == "json":
        out = {k: [float(x) for x in v] for k, v in cols.items()}
        out["method"] = args.method
        if plan is not None:
            out["plan"] = plan.as_dict()
        out.update(summary)
        return _json(out), ""
    rows = zip(*cols.values())
    note = ""
    if summary:
        pl = summary["plan"]
        note = (
            f"max_abs_diff={fmt(summary['max_abs_diff'])}\n"
            f"plan: terms={pl['terms']} error_bound={fmt(pl['error_bound'])} "
            f"a={fmt(pl['a'])} C={fmt(pl['C'])} k={fmt(pl['k'])}\n"
        )
    return _csv(list(cols), rows), note


def cmd_digits(args):
    p = _params(args)
    probs = metrics.digit_probabilities(p, args.base, args.epsilon)
    benford = benford_digit_probabilities(args.base)
    rows = [(d, probs[d], benford[d], abs(probs[d] - benford[d])) for d in probs]
    total = math.fsum(probs.values())
    max_dev = max(r[3] for r in rows)
    if args.format == "json":
        return _json(
            {
                "digits": [
                    {"digit": d, "weibull_prob": w, "benford_prob": b, "abs_deviation": e} for d, w, b, e in rows
                ],
                "total": total,
                "benford_total": math.fsum(benford.values()),
                "max_deviation": max_dev,
            }
        ), ""
    rows.append(("total", total, math.fsum(benford.values()), max_dev))
    return _csv(["digit", "weibull_prob", "benford_prob", "abs_deviation"], rows), ""


def _axis(lo, hi, steps, half_open):
    if not lo > 0 or hi < lo or steps < 1:
        raise UsageError(f"bad range lo={lo} hi={hi} steps={steps}: need lo > 0, hi >= lo, steps >= 1")
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps, endpoint=not half_open)


def cmd_sweep(args):
    if args.min_gamma < ABSOLUTE_MIN_GAMMA:
        raise UsageError(f"--min-gamma below {ABSOLUTE_MIN_GAMMA} is refused")
    glo, ghi, gsteps = args.gamma_range
    if glo < 0 or ghi < glo:
        raise UsageError(f"bad gamma range lo={glo} hi={ghi}: need 0 <= lo <= hi")
    # gamma -> 0 degenerates, so the low end is clamped rather than refused
    glo, ghi = max(glo, args.min_gamma), max(ghi, args.min_gamma)
    gammas = _axis(glo, ghi, int(gsteps), half_open=False)
    alo, ahi, asteps = args.alpha_range
    alphas = _axis(alo, ahi, int(asteps), half_open=ahi > alo)
    names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    bad = [m for m in names if m not in metrics.METRICS]
    if bad or not names:
        raise UsageError(f"--metrics must be a subset of {','.join(metrics.METRICS)}")
    rows = metrics.sweep(gammas, alphas, args.base, names, args.grid_size, args.epsilon, args.workers)
    if args.format == "json":
        return _json({"base": args.base, "metrics": names, "rows": rows}), ""
    header = ["gamma", "alpha", *names]
    return _csv(header, ([r[h] for h in header] for r in rows)), ""


def cmd_bound(args):
    if (args.terms is None) == (args.epsilon is None):
        raise UsageError("give exactly one of --terms or --epsilon")
    a, c = series.truncation_constants(args.gamma, args.base)
    info = {"gamma": args.gamma, "base": args.base, "a": a, "C": c}
    if args.terms is not None:
        info["terms"] = args.terms
        info["min_terms"] = series.min_terms_for_bound(args.gamma, args.base)
        info["bound"] = series.truncation_bound(args.terms, args.gamma, args.base)
    else:
        info.update(series.terms_for_epsilon(args.epsilon, args.gamma, args.base).as_dict())
    if args.format == "json":
        return _json(info), ""
    return _csv(["field", "value"], info.items()), ""


def cmd_montecarlo(args):
    p = _params(args)
    emp = montecarlo.empirical_digit_frequencies(p, args.base, args.n, args.seed, args.workers)
    probs = metrics.digit_probabilities(p, args.base, args.epsilon)
    freqs = emp.frequencies
    rows = [(d, freqs[d], probs[d], abs(freqs[d] - probs[d])) for d in probs]
    max_dev = max(r[3] for r in rows)
    tol = emp.tolerance()
    ok = max_dev <= tol
    if args.format == "json":
        out = _json(
            {
                "n": emp.n,
                "seed": emp.seed,
                "digits": [
                    {"digit": d, "empirical": e, "analytic": a, "abs_deviation": x} for d, e, a, x in rows
                ],
                "max_deviation": max_dev,
                "tolerance": tol,
                "pass": ok,
            }
        )
    else:
        rows.append(("max", "", "", max_dev))
        out = _csv(["digit", "empirical", "analytic", "abs_deviation"], rows)
    note = "" if ok else f"max deviation {fmt(max_dev)} exceeds 5/sqrt(n) = {fmt(tol)}\n"
    return out, note, (0 if ok else 1)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _positive_float(s):
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _base(s):
    v = float(s)
    if not v > 1:
        raise argparse.ArgumentTypeError(f"base must exceed 1, got {s}")
    return int(v) if v == int(v) else v


def _int_base(s):
    v = _base(s)
    if not isinstance(v, int):
        raise argparse.ArgumentTypeError(f"digit commands need an integer base, got {s}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="weibull-benford",
        description="Leading-digit law of Weibull random variables versus Benford's law.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, dist=True, int_base=False, epsilon=True):
        if dist:
            sp.add_argument("--gamma", type=_positive_float, required=True, help="shape parameter")
            sp.add_argument("--alpha", type=_positive_float, default=1.0, help="scale parameter")
        sp.add_argument("--base", type=_int_base if int_base else _base, default=10)
        if epsilon:
            sp.add_argument("--epsilon", type=_positive_float, default=series.DEFAULT_EPSILON)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write to this file instead of stdout")

    sp = sub.add_parser("density", help="density of log_B X mod 1 on a z-grid")
    common(sp)
    sp.add_argument("--grid-size", type=_positive_int, default=1024)
    sp.add_argument("--method", choices=("series", "direct", "both"), default="series")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("digits", help="first-digit probabilities against Benford")
    common(sp, int_base=True)
    sp.set_defaults(func=cmd_digits)

    sp = sub.add_parser("sweep", help="KS/L1/L2 over a (gamma, alpha) grid")
    common(sp, dist=False)
    sp.add_argument("--gamma-range", nargs=3, type=float, metavar=("LO", "HI", "STEPS"), required=True)
    sp.add_argument(
        "--alpha-range",
        nargs=3,
        type=float,
        metavar=("LO", "HI", "STEPS"),
        default=(1.0, 10.0, 9),
        help="alpha values; HI is excluded when HI > LO",
    )
    sp.add_argument("--metrics", default="ks,l1,l2")
    sp.add_argument("--grid-size", type=_positive_int, default=metrics.DEFAULT_GRID)
    sp.add_argument("--workers", type=_positive_int, default=1)
    sp.add_argument(
        "--min-gamma",
        type=float,
        default=DEFAULT_MIN_GAMMA,
        help=f"gamma values below this are clamped up to it (default {DEFAULT_MIN_GAMMA}; not below {ABSOLUTE_MIN_GAMMA})",
    )
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bound", help="Fourier truncation bound or term count")
    sp.add_argument("--gamma", type=_positive_float, required=True)
    sp.add_argument("--base", type=_base, default=10)
    sp.add_argument("--terms", type=_positive_int)
    sp.add_argument("--epsilon", type=_positive_float)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("montecarlo", help="simulated digit frequencies against the series")
    common(sp, int_base=True)
    sp.add_argument("--n", type=_positive_int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=_positive_int, default=1)
    sp.set_defaults(func=cmd_montecarlo)
    return parser


def _resolve_output(path):
    base_dir = os.environ.get(OUTPUT_DIR_ENV)
    if base_dir and not os.path.isabs(path):
        return os.path.join(base_dir, path)
    return path


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, DomainError, PreconditionError) as e:
        parser.error(str(e))
    except (ConvergenceError, OverflowError, FloatingPointError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    text, note = result[0], result[1]
    code = result[2] if len(result) > 2 else 0
    if args.output:
        with open(_resolve_output(args.output), "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if note:
        sys.stderr.write(note)
    return code


if __name__ == "__main__":
    sys.exit(main())
