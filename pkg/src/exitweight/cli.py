"""Command-line front end: ``exitweight {spectrum,exit,bsc,bounds}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from math import log2

import numpy as np

from . import bsc, exit_mu, spectrum
from .codes import BinaryCode, dual, load_gm, min_distance, rm_code
from .errors import DimensionTooLargeError, ExitWeightError, GridError, ParameterRangeError
from .parallel import default_threads
from .report import Table, emit

IDENTITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Grid:
    start: float
    end: float
    points: int

    @classmethod
    def parse(cls, text: str, lo: float = 0.0, hi: float = 1.0) -> "Grid":
        """Parse "start:end:points" (inclusive endpoints)."""
        try:
            a, b, n = text.split(":")
            g = cls(float(a), float(b), int(n))
        except ValueError:
            raise GridError(f"grid {text!r} is not start:end:points") from None
        if not (lo <= g.start <= hi and lo <= g.end <= hi):
            raise GridError(f"grid {text!r} leaves [{lo}, {hi}]")
        if g.points < 1 or (g.points > 1 and g.start >= g.end):
            raise GridError(f"grid {text!r} needs start < end and points >= 1")
        return g

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.end, self.points)

    def __str__(self):
        return f"{self.start!r}:{self.end!r}:{self.points}"


def _code(args) -> BinaryCode:
    if args.rm is not None:
        return rm_code(*args.rm)
    if args.code is not None:
        return load_gm(args.code)
    raise ParameterRangeError("a code is required (--rm R M or --code FILE)")


def _code_meta(code: BinaryCode) -> dict:
    return {"code": code.name or str(code), "n": code.n, "k": code.k}


def _threads(args) -> int:
    return args.threads if args.threads else default_threads()


def _emit(args, command, tables, meta):
    emit(command, tables, meta, fmt=args.format, out=args.out, pretty=args.pretty,
         stream=sys.stdout)


# ------------------------------------------------------------------ spectrum


def _report_table(rep: spectrum.BoundReport) -> Table:
    return Table(
        "bound_report",
        ["i", "istar", "log2_ai", "bound1", "bound2", "branch", "eps", "eps1", "eps2"],
        [[r.i, r.istar, r.log2_a, r.bound1, r.bound2, r.branch, r.eps, r.eps1, r.eps2]
         for r in rep.records],
    )


def cmd_spectrum(args) -> int:
    code = _code(args)
    wd = spectrum.weight_distribution(code, threads=_threads(args))
    meta = _code_meta(code)
    meta["min_distance"] = wd.min_distance
    meta["enumerated"] = "C" if code.k <= code.n - code.k else "dual+macwilliams"
    tables = [Table("distribution", ["i", "a_i"], list(enumerate(wd.counts)))]
    if 0 < code.k < code.n:
        rep = spectrum.bound_report_from(wd, meta["code"])
        meta.update(max_eps1=rep.max_eps1, max_eps2=rep.max_eps2,
                    branch_threshold=rep.threshold)
        tables.append(_report_table(rep))
    _emit(args, "spectrum", tables, meta)
    return 0


# ---------------------------------------------------------------------- exit


def cmd_exit(args) -> int:
    code = _code(args)
    grid = Grid.parse(args.grid).values()
    if args.mc:
        if args.seed is None:
            raise ParameterRangeError("--mc requires --seed")
        if args.verify_identity:
            raise ParameterRangeError("--verify-identity needs exact mode")
        cfg = exit_mu.SamplingConfig("mc", samples=args.samples, seed=args.seed,
                                     threads=_threads(args))
    else:
        cfg = exit_mu.EXACT
        if code.n > exit_mu.EXACT_CUTOFF:
            raise DimensionTooLargeError(
                f"n={code.n} above exact cutoff {exit_mu.EXACT_CUTOFF}; "
                "rerun with --mc --samples N --seed S"
            )
    curve = exit_mu.exit_curve(code, grid, cfg)
    meta = _code_meta(code)
    meta.update(mode=cfg.mode, grid=args.grid)
    if cfg.mode == "mc":
        meta.update(samples=cfg.samples, seed=cfg.seed)
    th = exit_mu.threshold_estimate(curve)
    meta.update(threshold_inside_grid=th.inside_grid, p_star=th.p_star,
                p_star_err=th.p_star_err, width=th.width, width_err=th.width_err)
    tables = [Table("exit", ["p", "h", "stderr"],
                    list(zip(curve.grid, curve.values, curve.stderr)))]
    status = 0
    if cfg.mode == "exact":
        idt = exit_mu.identity_table(code, grid)
        meta["identity_max_discrepancy"] = idt.discrepancy
        tables.append(Table("mu", ["lambda", "mu", "dmu", "identity_rhs"],
                            list(zip(idt.lam, idt.mu, idt.dmu, idt.rhs))))
        if args.verify_identity and not idt.discrepancy <= IDENTITY_TOLERANCE:
            print(f"identity discrepancy {idt.discrepancy:.3e} exceeds "
                  f"{IDENTITY_TOLERANCE:.0e}", file=sys.stderr)
            status = 1
    else:
        mc = exit_mu.mu_curve(code, grid, cfg)
        tables.append(Table("mu", ["lambda", "mu", "stderr"],
                            list(zip(mc.grid, mc.values, mc.stderr))))
    _emit(args, "exit", tables, meta)
    return status


# ----------------------------------------------------------------------- bsc


def cmd_bsc(args) -> int:
    tables = []
    meta: dict = {}
    if args.rate_curves:
        grid = Grid.parse(args.grid or "0:0.5:501", 0.0, 0.5)
        fc = bsc.rate_curves(grid.values())
        meta["rate_curves_grid"] = str(grid)
        tables.append(Table("rate_curves", ["p", "capacity", "critical_rate"],
                            list(zip(fc.p, fc.capacity, fc.critical_rate))))
    if args.rm is not None or args.code is not None:
        code = _code(args)
        meta.update(_code_meta(code))
        wd = spectrum.weight_distribution(code, threads=_threads(args))
        meta["min_distance"] = wd.min_distance
        meta["d_over_log2n"] = wd.min_distance / log2(code.n) if code.n > 1 else None
        if args.p:
            for p in args.p:
                if not 0.0 <= p <= 0.5:
                    raise ParameterRangeError(f"p={p} outside [0, 1/2]")
            if args.seed is None or not args.trials:
                raise ParameterRangeError("simulation needs --trials and --seed")
            rows = []
            for p in args.p:
                res = bsc.simulate_bsc(code, p, args.trials, args.seed,
                                       threads=_threads(args), method=args.method)
                ub = bsc.union_bound(wd, p)
                g = bsc.growth_condition(wd, p)
                lo, hi = res.ci95
                rows.append([p, res.trials, res.errors, res.estimate, res.stderr, lo, hi,
                             ub, ub > 1.0, g.growth, g.holds, res.seed, res.tie_policy,
                             res.method])
            tables.append(Table(
                "simulation",
                ["p", "trials", "errors", "estimate", "stderr", "ci_low", "ci_high",
                 "union_bound", "vacuous", "growth", "growth_holds", "seed",
                 "tie_policy", "method"],
                rows))
        if args.sweep:
            grid = Grid.parse(args.sweep, 0.0, 0.5)
            vals, vac = bsc.union_bound_curve(wd, grid.values())
            meta["sweep_grid"] = str(grid)
            tables.append(Table("union_bound", ["p", "bound", "vacuous_flag"],
                                list(zip(grid.values(), vals, vac))))
    if not tables:
        raise ParameterRangeError("nothing to do: give --rate-curves, or a code with --p/--sweep")
    _emit(args, "bsc", tables, meta)
    return 0


# -------------------------------------------------------------------- bounds


def cmd_bounds(args) -> int:
    meta: dict = {}
    if args.rm is not None or args.code is not None:
        code = _code(args)
        wd = spectrum.weight_distribution(code, threads=_threads(args))
        n, k = code.n, code.k
        counts = wd.counts
        meta.update(_code_meta(code), min_distance=wd.min_distance)
    else:
        if args.n is None or args.rate is None:
            raise ParameterRangeError("give a code, or both --n and --rate")
        n, k, counts = args.n, args.rate * args.n, None
    R = k / n
    rstar = args.rstar if args.rstar is not None else R
    if args.a is not None:
        a = args.a
    elif args.c is not None and args.t is not None:
        a = spectrum.a_of_R_c_t(R, args.c, args.t)
    else:
        a = 1.0 - rstar
    meta.update(rate=R, rstar=rstar, a=a, theta=spectrum.theta(R))
    rows = []
    for i in range(n + 1):
        b1 = spectrum.bound_first(i, n, R)
        b2 = spectrum.bound_second(i, n, R, k)
        b3 = spectrum.bound_from_constant(i, a)
        la = (log2(counts[i]) if counts[i] else float("-inf")) if counts else None
        rows.append([i, min(i, n - i), la, b1, b2.exponent, b2.branch, b3])
    tables = [Table("bounds", ["i", "istar", "log2_ai", "bound1", "bound2", "branch",
                               "bound_a"], rows)]
    if counts:
        rep = spectrum.bound_report_from(wd, meta["code"])
        meta.update(max_eps1=rep.max_eps1, max_eps2=rep.max_eps2)
        try:
            meta["min_distance_enumerated"] = min_distance(code)
        except DimensionTooLargeError:
            meta["min_distance_enumerated"] = None
        meta["dual_min_distance"] = spectrum.macwilliams(wd).min_distance if k < n else None
    _emit(args, "bounds", tables, meta)
    return 0


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--rm", nargs=2, type=int, metavar=("R", "M"), help="Reed-Muller RM(R,M)")
    src.add_argument("--code", metavar="FILE", help="generator matrix in .gm format")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", metavar="DIR", help="write files here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="aligned text on stdout")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $EXITWEIGHT_THREADS or CPU count)")

    parser = argparse.ArgumentParser(prog="exitweight", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="weight distribution + bound report")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("exit", parents=[common], help="EXIT curves, mu, identity check")
    p.add_argument("--grid", default="0:1:101", help="start:end:points, inclusive")
    p.add_argument("--mc", action="store_true", help="Monte Carlo instead of exact")
    p.add_argument("--samples", type=int, default=exit_mu.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int)
    p.add_argument("--verify-identity", action="store_true",
                   help=f"exit 1 if the identity discrepancy exceeds {IDENTITY_TOLERANCE:g}")
    p.set_defaults(func=cmd_exit)

    p = sub.add_parser("bsc", parents=[common], help="BSC simulation, union bound, rate curves")
    p.add_argument("--p", type=float, nargs="+", help="crossover probabilities")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--method", choices=["auto", "codewords", "syndrome"], default="auto")
    p.add_argument("--rate-curves", action="store_true", help="capacity vs critical-rate table")
    p.add_argument("--grid", help="rate-curve grid start:end:points within [0, 0.5]")
    p.add_argument("--sweep", metavar="GRID", help="union-bound sweep grid")
    p.set_defaults(func=cmd_bsc)

    p = sub.add_parser("bounds", parents=[common], help="bound exponents per weight")
    p.add_argument("--n", type=int, help="block length when no code is given")
    p.add_argument("--rate", type=float, help="rate when no code is given")
    p.add_argument("--rstar", type=float, help="R* for the Reed-Muller bound (default: R)")
    p.add_argument("--a", type=float, help="explicit spectrum constant a")
    p.add_argument("--c", type=float, help="distance exponent c for a(R,c,t)")
    p.add_argument("--t", type=float, help="threshold exponent t for a(R,c,t)")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExitWeightError as exc:
        print(f"exitweight {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
