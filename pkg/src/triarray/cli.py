"""Command-line front end.

Every subcommand is a pure function of its flags; output is CSV with a
header row, numbers printed with 17 significant digits, and ``#``-prefixed
summary lines. Errors print one line to stderr and exit with

* 2  usage: missing, conflicting or out-of-range flags
* 3  domain: invalid schedule or parameter (e.g. lambda <= 0, p outside (0,1),
     theorem/kind mismatch)
* 4  io: unreadable schedule file or unwritable output
"""

from __future__ import annotations

import argparse
import io
import sys

import numpy as np

from . import charfn, conditions, sums, validation
from .distributions import Kind
from .schedules import (
    Generator,
    RowSchedule,
    ScheduleFamily,
    generate_row,
    parse_schedule,
)

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

CHECK_COLUMNS = ["n", "sup_p", "sum_p", "sup_pq", "sum_pq", "sup_q_over_p2",
                 "sum_q_over_p", "sum_q_over_p2", "uan", "mv", "mean_sum",
                 "lindeberg_poisson", "b_functional", "verdict", "sup_q", "sum_q"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(s) for s in text.strip("[]").split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("schedule source (inline flags or --schedule-file)")
    src.add_argument("--kind", choices=[k.value for k in Kind])
    src.add_argument("--generator", choices=[g.value for g in Generator])
    src.add_argument("--lambda", dest="lam", type=float)
    src.add_argument("--gamma", type=float)
    src.add_argument("--delta", type=float)
    src.add_argument("--params", type=_float_list, help="explicit row, e.g. 0.1,0.2,0.3")
    src.add_argument("--schedule-file")
    common.add_argument("--kn", type=int, help="cells in the row (row label n = kn)")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = _Parser(prog="triarray", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("exact-pmf", parents=[common], help="exact law of the row sum")
    p = sub.add_parser("pvalue", parents=[common], help="certified P(S > t)")
    p.add_argument("--t", type=int, required=True)
    p = sub.add_parser("check", parents=[common], help="theorem hypothesis report")
    p.add_argument("--theorem", choices=["T1", "T2", "T3", "T4"], required=True)
    p.add_argument("--eps", type=float, default=conditions.REFERENCE_EPS)
    p.add_argument("--n-grid", type=_int_list, required=True)
    p = sub.add_parser("converge", parents=[common], help="distance to the Poisson limit")
    p.add_argument("--n-grid", type=_int_list, required=True)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-lo", type=float, default=charfn.GRID_LO)
    p.add_argument("--grid-hi", type=float, default=charfn.GRID_HI)
    p.add_argument("--grid-points", type=int, default=charfn.GRID_POINTS)
    p = sub.add_parser("charfn-compare", parents=[common], help="row cf against the Poisson cf")
    p.add_argument("--grid-lo", type=float, default=charfn.GRID_LO)
    p.add_argument("--grid-hi", type=float, default=charfn.GRID_HI)
    p.add_argument("--grid-points", type=int, default=charfn.GRID_POINTS)
    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo law of the row sum")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _check_flags(args) -> None:
    if not (0.0 < args.tol < 1.0):
        raise UsageError(f"--tol must lie in (0, 1), got {args.tol}")
    eps = getattr(args, "eps", None)
    if eps is not None and not (0.0 < eps < 1.0):
        raise UsageError(f"--eps must lie in (0, 1), got {eps}")
    reps = getattr(args, "reps", None)
    if reps is not None and reps < 1:
        raise UsageError(f"--reps must be positive, got {reps}")
    if getattr(args, "grid_points", 1) < 1:
        raise UsageError("--grid-points must be positive")
    if hasattr(args, "grid_lo") and not args.grid_hi > args.grid_lo:
        raise UsageError("--grid-hi must exceed --grid-lo")
    if args.kn is not None and args.kn < 1:
        raise UsageError(f"--kn must be positive, got {args.kn}")
    grid = getattr(args, "n_grid", None)
    if grid is not None and (min(grid) < 1 or any(b <= a for a, b in zip(grid, grid[1:]))):
        raise UsageError("--n-grid must be strictly increasing positive integers")


def load_source(args) -> ScheduleFamily | RowSchedule:
    inline = [f for f in ("generator", "params", "lam", "gamma", "delta") if getattr(args, f) is not None]
    if args.schedule_file:
        if inline or args.kind:
            raise UsageError("give either --schedule-file or inline schedule flags, not both")
        with open(args.schedule_file, encoding="utf-8") as fh:
            return parse_schedule(fh.read())
    if not inline:
        raise UsageError("no schedule source: pass --generator/--params or --schedule-file")
    if args.kind is None:
        raise UsageError("--kind is required with inline schedule flags")
    gen = args.generator or ("explicit" if args.params is not None else None)
    if gen is None:
        raise UsageError("--generator is required unless --params is given")
    if gen == "explicit":
        if args.params is None:
            raise UsageError("--generator explicit needs --params")
        return RowSchedule(Kind(args.kind), args.params, args.kn or len(args.params))
    if args.params is not None:
        raise UsageError("--params only goes with --generator explicit")
    return ScheduleFamily(Generator(gen), Kind(args.kind), args.lam, args.gamma, args.delta)


def _single_row(args, source) -> RowSchedule:
    if isinstance(source, RowSchedule):
        return source
    if args.kn is None:
        raise UsageError("--kn is required with a generator schedule")
    return generate_row(source, args.kn, args.kn)


def cmd_exact_pmf(args, out) -> None:
    row = _single_row(args, load_source(args))
    law = sums.row_sum_law(row, args.tol)
    out.write("j,mass\n")
    for j, m in zip(law.pmf.support, law.pmf.masses):
        out.write(f"{fmt(j)},{fmt(m)}\n")
    out.write(f"# mean={fmt(law.mean())},variance={fmt(law.variance())},"
              f"accumulated_tail={fmt(law.accumulated_tail)},method={law.method.value}\n")


def cmd_pvalue(args, out) -> None:
    row = _single_row(args, load_source(args))
    law = sums.row_sum_law(row, args.tol)
    lo, hi = sums.tail_probability(law, args.t)
    out.write(f"P(S>{args.t}) in [{fmt(lo)}, {fmt(hi)}]\n")


def cmd_check(args, out) -> None:
    source = load_source(args)
    lam = args.lam
    if isinstance(source, RowSchedule) and lam is None:
        lam = source.moments().mean_sum
    reports = conditions.theorem_verdict(source, args.n_grid, [args.eps], args.theorem, lam)
    out.write(",".join(CHECK_COLUMNS) + "\n")
    for r in reports:
        qv = r.quantities
        vals = [r.n, qv["sup_p"], qv["sum_p"], qv["sup_pq"], qv["sum_pq"], qv["sup_q_over_p2"],
                qv["sum_q_over_p"], qv["sum_q_over_p2"], r.uan, r.mv, r.mean_sum,
                r.lindeberg_poisson, r.b_functional]
        out.write(",".join(fmt(v) for v in vals))
        out.write(f",{'pass' if r.verdict else 'fail'},{fmt(qv['sup_q'])},{fmt(qv['sum_q'])}\n")
    last = reports[-1]
    verdicts = ",".join(f"{k}={'pass' if v else 'fail'}" for k, v in last.verdicts.items())
    out.write(f"# theorem={last.theorem},lambda={fmt(last.lambda_target)},eps={fmt(last.eps)}\n")
    out.write(f"# hypotheses: {verdicts}\n")
    if last.theorem == "T4":
        out.write(f"# moment_disagree={'yes' if last.moment_disagree else 'no'}\n")


def cmd_converge(args, out) -> None:
    source = load_source(args)
    if not isinstance(source, ScheduleFamily) or source.lambda_target is None:
        raise ValueError("converge needs a generator family with a lambda target")
    ts = charfn.default_grid(args.grid_lo, args.grid_hi, args.grid_points)
    tr = validation.convergence_trace(source, args.n_grid, args.tol, args.reps, args.seed, ts)
    cols = ["n", "lambda_hat", "tv_lo", "tv_hi", "kolmogorov", "cf_dist"]
    if args.reps:
        cols.append("mc_tv")
    out.write(",".join(cols) + "\n")
    for i, n in enumerate(tr.n_grid):
        vals = [n, tr.lambda_hat[i], tr.tv[i][0], tr.tv[i][1], tr.kolmogorov[i], tr.cf_dist[i]]
        if args.reps:
            vals.append(tr.mc_tv[i])
        out.write(",".join(fmt(v) for v in vals) + "\n")
    out.write(f"# lambda={fmt(tr.lambda_target)},tol={fmt(args.tol)}"
              + (f",reps={args.reps},seed={args.seed}" if args.reps else "") + "\n")


def cmd_charfn_compare(args, out) -> None:
    source = load_source(args)
    row = _single_row(args, source)
    lam = args.lam if args.lam is not None else row.moments().mean_sum
    ts = charfn.default_grid(args.grid_lo, args.grid_hi, args.grid_points)
    a = charfn.CfGrid(ts, charfn.row_cf(row, ts))
    b = charfn.CfGrid(ts, charfn.poisson_cf(lam, ts))
    out.write("t,re_row,im_row,re_poisson,im_poisson,abs_diff\n")
    for t, x, y in zip(ts, a.values, b.values):
        out.write(",".join(fmt(v) for v in (t, x.real, x.imag, y.real, y.imag, abs(x - y))) + "\n")
    out.write(f"# lambda={fmt(lam)},cf_dist={fmt(charfn.cf_distance(a, b))}\n")


def cmd_simulate(args, out) -> None:
    row = _single_row(args, load_source(args))
    emp = validation.simulate_row_sum(row, args.reps, args.seed)
    out.write("j,freq\n")
    for j, m in zip(emp.support, emp.masses):
        out.write(f"{fmt(j)},{fmt(m)}\n")
    out.write(f"# reps={args.reps},seed={args.seed},mean={fmt(emp.mean())}\n")


COMMANDS = {
    "exact-pmf": cmd_exact_pmf,
    "pvalue": cmd_pvalue,
    "check": cmd_check,
    "converge": cmd_converge,
    "charfn-compare": cmd_charfn_compare,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_flags(args)
        buf = io.StringIO()
        COMMANDS[args.command](args, buf)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
        return 0
    except UsageError as exc:
        print(f"triarray: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"triarray: io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"triarray: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
