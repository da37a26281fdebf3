"""Command-line front end.

Exit codes: 0 success, 1 argument or parameter error, 2 numerical
tolerance failure (including unwritable output files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import bounds
from .bounds import RationalRate
from .errors import NonConvergenceError, ParameterError, PreconditionError, ToleranceError
from .kernels import KernelSpec, LayeredFilter, nyquist_isi_defect
from .l1norm import QuadratureSpec, kernel_l1
from .opnorm import GridSpec, operator_norm
from .verify import extremal_check, lp_c1_trig, monte_carlo_lower_bound

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

SWEEP_COLUMNS = ("L", "c1_cos", "c1_sqrt", "c2_sota_pushed", "c2_new", "opnorm_numeric",
                 "cert_error")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for numerics here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _fmt(v):
    return "" if v is None else f"{v:.12g}"


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _rate(args):
    _need(args, "n", "m")
    return RationalRate(args.n, Fraction(args.m))


def cmd_bound(args):
    kind = args.kind
    if kind == "c1-cos":
        _need(args, "L")
        r = bounds.c1_cos_bound(args.L)
    elif kind == "c1-sqrt":
        _need(args, "L")
        r = bounds.c1_sqrt_bound(args.L)
    elif kind == "c2-sota":
        _need(args, "leps")
        r = bounds.c2_sota_bound(args.leps)
    elif kind == "c2-asym":
        _need(args, "leps")
        r = bounds.c2_asymptotic(args.leps)
    elif kind == "c2-new":
        r = bounds.c2_new_bound(_rate(args), args.step, args.window)
    elif kind == "c1-corollary":
        _need(args, "n")
        r = bounds.c1_corollary_bound(args.n, args.step)
    elif kind == "nyquist":
        r = bounds.nyquist_overshoot_bound(_rate(args), args.step, args.window)
    else:
        _need(args, "L")
        r = bounds.best_upper_bound(args.L, args.step)
    _emit(r.to_dict())
    return EXIT_OK


def _sweep_row(L, with_opnorm):
    rate = RationalRate.from_L(L)
    c2_new = opn = None
    cert = 0.0
    if rate is not None:
        # the full-period window gives a valid bound for m = 1/2 as well
        r = bounds.c2_new_bound(rate, window="period")
        c2_new, cert = r.value, r.cert_error
        if with_opnorm:
            o = operator_norm(KernelSpec.trapezoid(float(rate.leps)), float(rate.L))
            opn, cert = o.value, max(cert, o.cert_error)
    return (L, bounds.c1_cos_bound(L).value, bounds.c1_sqrt_bound(L).value,
            bounds.c2_sota_bound(2 * L - 1).value, c2_new, opn, cert)


def sweep_rows(l_min, l_max, step, with_opnorm=False, jobs=1):
    if not (1 < l_min < l_max):
        raise ParameterError("need 1 < l_min < l_max")
    if not step > 0:
        raise ParameterError("step must be positive")
    count = int(math.floor((l_max - l_min) / step + 1e-9)) + 1
    Ls = [round(l_min + i * step, 12) for i in range(count)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(lambda L: _sweep_row(L, with_opnorm), Ls))
    return [_sweep_row(L, with_opnorm) for L in Ls]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def cmd_sweep(args):
    rows = sweep_rows(args.l_min, args.l_max, args.step, args.with_opnorm, args.jobs)
    text = sweep_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _load_filter(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read filter spec {path}: {exc}") from None
    return LayeredFilter.from_dict(data)


def _kernel(args):
    if args.kernel == "layered":
        _need(args, "spec")
        return KernelSpec.layered(_load_filter(args.spec))
    if args.kernel == "trapezoid":
        _need(args, "leps")
        return KernelSpec.trapezoid(args.leps, B=args.B)
    if args.kernel == "triangle":
        return KernelSpec.triangle(args.n or 1, B=args.B)
    return KernelSpec.sinc(B=args.B)


def cmd_opnorm(args):
    grid = GridSpec(args.points, args.truncation, args.target_tail)
    r = operator_norm(_kernel(args), args.L, grid, args.method)
    out = r.to_dict()
    out["details"] = r.details
    _emit(out)
    return EXIT_OK


def cmd_verify(args):
    if args.extremal is not None:
        _emit(extremal_check(args.extremal).to_dict())
        return EXIT_OK
    _need(args, "N", "N1")
    out = {"N": args.N, "N1": args.N1, "trials": args.trials, "seed": args.seed}
    mc = monte_carlo_lower_bound(args.N, args.N1, args.trials, args.seed, workers=args.workers)
    out["monte_carlo"] = mc.to_dict()
    if args.lp:
        out["lp"] = lp_c1_trig(args.N, args.N1, args.t_grid).to_dict()
    _emit(out)
    return EXIT_OK


def cmd_l1(args):
    r = kernel_l1(_kernel(args), QuadratureSpec(abs_tol=args.abs_tol))
    _emit(r.to_dict())
    return EXIT_OK


def cmd_design(args):
    filt = _load_filter(args.spec)
    kern = KernelSpec.layered(filt)
    b = bounds.layered_overshoot_bound(filt, args.L)
    try:
        isi = nyquist_isi_defect(kern, args.L * kern.B)
        isi = {"C_N": isi.C_N, "defect": isi.defect}
    except ParameterError:
        isi = None  # L*B outside the Nyquist interval of this filter
    l1 = kernel_l1(kern)
    _emit({"filter": filt.to_dict(), "L": args.L, "bound": b.value, "cert_error": b.cert_error,
           "layers": b.details["layers"], "isi": isi, "l1": l1.to_dict()})
    return EXIT_OK


def _add_kernel_options(p):
    p.add_argument("--kernel", choices=("sinc", "triangle", "trapezoid", "layered"),
                   default="trapezoid")
    p.add_argument("--leps", type=float, help="trapezoid bandwidth expansion factor")
    p.add_argument("--n", type=int, help="triangle half-width divisor")
    p.add_argument("--B", type=float, default=math.pi, help="in-band edge (rad/s)")
    p.add_argument("--spec", help="layered filter JSON file")


def build_parser():
    parser = _Parser(prog="overshoot", description="Overshoot bounds for sampled band-limited signals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="evaluate one bound")
    p.add_argument("--kind", required=True, choices=(
        "c1-cos", "c1-sqrt", "c2-sota", "c2-asym", "c2-new", "c1-corollary", "nyquist", "best"))
    p.add_argument("--L", type=float)
    p.add_argument("--leps", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=str, help="positive integer or 1/2")
    p.add_argument("--step", type=float)
    p.add_argument("--window", choices=bounds.WINDOWS, default="printed")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="write the bound comparison table as CSV")
    p.add_argument("--l-min", type=float, required=True)
    p.add_argument("--l-max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.add_argument("--with-opnorm", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("opnorm", help="numerical interpolation operator norm")
    _add_kernel_options(p)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--points", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--target-tail", type=float, default=1e-8)
    p.add_argument("--method", choices=("auto", "lattice", "truncated"), default="auto")
    p.set_defaults(func=cmd_opnorm)

    p = sub.add_parser("verify", help="lower bounds for trigonometric polynomials")
    p.add_argument("--N", type=int)
    p.add_argument("--N1", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--lp", action="store_true", help="also solve the linear program")
    p.add_argument("--t-grid", type=int, default=512)
    p.add_argument("--extremal", type=int, help="check the extremal signal at integer L")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("l1", help="L1 norm of a kernel")
    _add_kernel_options(p)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_l1)

    p = sub.add_parser("design", help="report on a layered Nyquist filter")
    p.add_argument("--spec", required=True, help="layered filter JSON file")
    p.add_argument("--L", type=float, required=True)
    p.set_defaults(func=cmd_design)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        _emit({"error": str(exc), "growth": exc.growth,
               "estimates": [list(e) for e in exc.estimates]})
        return EXIT_NUMERIC
    except ToleranceError as exc:
        print(f"overshoot: tolerance failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ParameterError, PreconditionError, ValueError, ZeroDivisionError) as exc:
        parser.print_usage(sys.stderr)
        print(f"overshoot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
