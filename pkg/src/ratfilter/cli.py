"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (reported with the error class
name), 2 on a usage error.  Filters and weights may be given as file paths or
as names of bundled fixtures (e.g. ``gamma_slise``, ``unit``, ``g3``).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as rio
from .benchmark import (
    BenchmarkProblem, convergence_rate, generate_intervals, performance_profile,
)
from .errors import RatFilterError
from .filters import evaluate
from .objective import residual_level
from .optimize import OptimizerConfig, optimize
from .seeds import elliptic_filter, gauss_filter, trapezoidal_filter
from .subspace import subspace_iteration
from .weights import check_guideline1, check_guideline2, check_guideline3

SEEDS = {"gauss": gauss_filter, "trapezoid": trapezoidal_filter, "elliptic": elliptic_filter}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _emit_filter(f, path):
    if path in (None, "-"):
        import json
        print(json.dumps(rio.filter_to_dict(f), indent=1))
    else:
        rio.save_filter(f, path)


def _filter_arg(spec, q=None):
    if spec in SEEDS:
        if q is None:
            raise UsageError(f"--q is required with a {spec} filter")
        return SEEDS[spec](q)
    try:
        return rio.resolve_filter(spec)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _weight_arg(spec):
    try:
        return rio.resolve_weight(spec)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def cmd_seed(a):
    _emit_filter(SEEDS[a.type](a.q), a.out)


def cmd_optimize(a):
    start = _filter_arg(a.start, a.q)
    W = _weight_arg(a.weights)
    cfg = OptimizerConfig(method=a.method, penalty=a.penalty, box_lb=a.box, max_iters=a.max_iters)
    res = optimize(start, W, cfg)
    _emit_filter(res.filter, a.out)
    print(f"level {res.level:.10g} iterations {res.iterations} reason {res.reason}",
          file=sys.stderr if a.out in (None, "-") else sys.stdout)


def cmd_eval(a):
    f = _filter_arg(a.filter, a.q)
    t = np.asarray(a.t, dtype=float) if a.t else np.linspace(a.tmin, a.tmax, a.n)
    v = np.atleast_1d(evaluate(f, t))
    fh = _out(a.out)
    fh.write("t,f\n")
    for ti, vi in zip(t, v):
        fh.write(f"{float(ti)!r},{float(vi)!r}\n")
    if fh is not sys.stdout:
        fh.close()


def cmd_residual(a):
    print(f"{residual_level(_filter_arg(a.filter, a.q), _weight_arg(a.weights)):.12g}")


def cmd_check(a):
    f = _filter_arg(a.filter, a.q)
    W = _weight_arg(a.weights)
    for rep in (check_guideline1(f, W), check_guideline2(W), check_guideline3(f)):
        print(rep)
        for off in rep.offenders[:5]:
            print("  at", ", ".join(f"{x:.6g}" for x in off))


def cmd_tau(a):
    f = _filter_arg(a.filter, a.q)
    S = rio.load_spectrum(a.spectrum)
    prob = BenchmarkProblem.from_spectrum(S, a.interval[0], a.interval[1], a.pfactor)
    print(f"m {prob.m} p {prob.p} tau {convergence_rate(f, S, prob):.10g}")


def cmd_intervals(a):
    S = rio.load_spectrum(a.spectrum)
    probs = generate_intervals(S, a.M, a.fmin, a.fmax, a.pfactor)
    fh = _out(a.out)
    fh.write("a,b,m,p\n")
    for p in probs:
        fh.write(f"{p.a!r},{p.b!r},{p.m},{p.p}\n")
    if fh is not sys.stdout:
        fh.close()


def cmd_profile(a):
    curves = performance_profile(rio.read_metrics_csv(a.metrics))
    fh = _out(a.out)
    rio.write_profile_csv(curves, fh)
    if fh is not sys.stdout:
        fh.close()


def cmd_subspace(a):
    A = rio.load_matrix(a.matrix)
    f = _filter_arg(a.filter, a.q)
    res = subspace_iteration(A, tuple(a.interval), f, a.pfactor, a.tol, a.max_iters, a.seed)
    print(f"m {res.m} p {res.p} iterations {res.iterations} residual {res.residual:.3e} seed {res.seed}")
    for v in res.values:
        print(f"{float(v)!r}")


def build_parser():
    p = _Parser(prog="ratfilter", description="Rational filter design and evaluation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("seed", help="construct a Gauss, trapezoid or elliptic filter")
    s.add_argument("--type", choices=sorted(SEEDS), required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_seed)

    s = sub.add_parser("optimize", help="optimize a filter for a weight function")
    s.add_argument("--start", required=True, help="gauss, trapezoid, elliptic, or a filter file")
    s.add_argument("--q", type=int)
    s.add_argument("--weights", default="unit")
    s.add_argument("--method", choices=["gd", "lm"], default="lm")
    s.add_argument("--penalty", type=float, default=0.0)
    s.add_argument("--box", type=float)
    s.add_argument("--max-iters", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("eval", help="filter values on a grid as CSV t,f")
    s.add_argument("--filter", required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--tmin", type=float, default=-3.0)
    s.add_argument("--tmax", type=float, default=3.0)
    s.add_argument("--n", type=int, default=601)
    s.add_argument("--t", type=float, nargs="+", help="explicit evaluation points")
    s.add_argument("--out")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("residual", help="residual level of a filter")
    s.add_argument("--filter", required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--weights", default="unit")
    s.set_defaults(func=cmd_residual)

    s = sub.add_parser("check", help="weight-selection guideline reports")
    s.add_argument("--filter", required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--weights", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("tau", help="convergence rate on a spectrum")
    s.add_argument("--filter", required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--spectrum", required=True)
    s.add_argument("--interval", type=float, nargs=2, required=True, metavar=("A", "B"))
    s.add_argument("--pfactor", type=float, default=1.5)
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("intervals", help="benchmark intervals from a spectrum")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--M", type=int, default=45)
    s.add_argument("--fmin", type=float, default=0.05)
    s.add_argument("--fmax", type=float, default=0.20)
    s.add_argument("--pfactor", type=float, default=1.5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_intervals)

    s = sub.add_parser("profile", help="performance profiles from a metrics CSV")
    s.add_argument("--metrics", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("subspace", help="filtered subspace iteration on a matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--interval", type=float, nargs=2, required=True, metavar=("A", "B"))
    s.add_argument("--filter", default="gauss")
    s.add_argument("--q", type=int, default=4)
    s.add_argument("--pfactor", type=float, default=1.5)
    s.add_argument("--tol", type=float, default=1e-13)
    s.add_argument("--max-iters", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_subspace)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except RatFilterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
